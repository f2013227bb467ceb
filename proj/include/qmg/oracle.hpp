#pragma once

#include <cstdint>
#include <functional>

#include "qmg/exec.hpp"
#include "qmg/kantorovich.hpp"

namespace qmg::oracle {

struct Options {
  int samples = 100000;
  int polish_steps = 3000;
  std::uint64_t seed = 2024;
  Exec exec = Exec::Parallel;
};

struct Estimate {
  double value = 0.0;       // lower bound on the true supremum
  double sampled = 0.0;     // best raw sample before polish
  RVector best;
  int samples = 0;
};

// sup |phi(a) - psi(a)| / L(a) by random directions plus hill-climb polish.
Estimate mk_distance(const SeminormSpec& spec, const AlgState& phi, const AlgState& psi,
                     const Options& opt = {});

// sup Re<v, x> / (||x|| + ||Dx||) over random x, same scheme.
Estimate dual_dnorm(const CVector& v, const HermMatrix& dirac, const Options& opt = {});

// Same scheme for any norm on C^n, e.g. the coupled module norms. Directions are drawn as
// precond * r with r Gaussian; pass a map that rounds out thin unit balls (empty = identity).
Estimate dual_norm(const CVector& v, const std::function<double(const CVector&)>& norm,
                   const Options& opt = {}, const CMatrix& precond = {});

}  // namespace qmg::oracle
