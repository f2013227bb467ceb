#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qmg/algebra.hpp"
#include "qmg/exec.hpp"

namespace qmg {

class FiniteSpectralTriple {
 public:
  FiniteSpectralTriple() = default;
  FiniteSpectralTriple(FiniteAlgebra algebra, HermMatrix dirac);

  const FiniteAlgebra& algebra() const { return alg_; }
  const HermMatrix& dirac() const { return dirac_; }
  Index dim() const { return dirac_.dim(); }
  FiniteSpectralTriple with_dirac(HermMatrix dirac) const { return {alg_, std::move(dirac)}; }

 private:
  FiniteAlgebra alg_;
  HermMatrix dirac_;
};

// ||[D, a]|| for self-adjoint a in the algebra.
double lip(const FiniteSpectralTriple& t, const HermMatrix& a);
double lip_unchecked(const HermMatrix& dirac, const CMatrix& a);
// ||xi|| + ||D xi||
double dnorm(const HermMatrix& dirac, const CVector& xi);

struct MetricReport {
  bool metric = false;
  bool leibniz = false;
  Index kernel_dim = 0;
  RVector singular_values;  // of a -> i[D,a] on the self-adjoint part, ascending
  double gap_ratio = 0.0;   // second smallest / largest
  double worst_leibniz_slack = 0.0;
  std::vector<std::string> messages;

  bool passed() const { return metric && leibniz; }
};

MetricReport check_metric(const FiniteSpectralTriple& t, int leibniz_samples = 64,
                          std::uint64_t seed = 7);

struct DiameterOptions {
  int restarts = 8;
  int rounds = 6;
  std::uint64_t seed = 11;
};

struct DiameterResult {
  double value = 0.0;  // best feasible spread found
  double best_mk = 0.0;
  HermMatrix witness;
  int solves = 0;
};

DiameterResult diameter(const FiniteSpectralTriple& t, const DiameterOptions& opt = {});

}  // namespace qmg
