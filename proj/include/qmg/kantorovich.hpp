#pragma once

#include <optional>
#include <vector>

#include "qmg/algebra.hpp"
#include "qmg/conic.hpp"
#include "qmg/triple.hpp"

namespace qmg {

// One piece of a max-of-norms seminorm: c -> || sum_k c_k images[k] ||.
struct SeminormTerm {
  std::vector<CMatrix> images;
  bool hermitian = false;  // images are self-adjoint
  bool equality = false;   // infinite weight: the image has to vanish
};

// L(c) = max over terms, on real coefficients of a self-adjoint basis in some ambient space.
struct SeminormSpec {
  std::vector<HermMatrix> basis;
  std::vector<SeminormTerm> terms;

  Index size() const { return static_cast<Index>(basis.size()); }
  Index ambient_dim() const { return basis.empty() ? 0 : basis.front().dim(); }

  double evaluate(const RVector& c) const;
  double evaluate(const HermMatrix& a) const;
  RVector coefficients(const HermMatrix& a) const;  // throws if a is off the span
  HermMatrix element(const RVector& c) const;
};

SeminormSpec lip_seminorm(const FiniteSpectralTriple& t);

// Conic blocks for L(R x) <= 1.
std::vector<conic::Block> seminorm_blocks(const SeminormSpec& spec, const RMatrix& R);

// Orthogonal projection onto the coefficients satisfying the equality terms.
RVector project_equalities(const SeminormSpec& spec, RVector c);
// Project onto the equality constraints and scale into the unit ball.
RVector repair_to_unit_ball(const SeminormSpec& spec, RVector c);

struct MkResult {
  double value = 0.0;        // feasible lower bound
  double upper_bound = 0.0;  // dual certificate
  RVector witness;           // coefficients
  conic::Diagnostics diag;
};

MkResult mk_distance(const SeminormSpec& spec, const AlgState& phi, const AlgState& psi,
                     const conic::Options& opt = {});
MkResult mk_distance(const FiniteSpectralTriple& t, const AlgState& phi, const AlgState& psi,
                     const conic::Options& opt = {});

// Objective vector phi(h_k) - psi(h_k).
RVector state_gradient(const SeminormSpec& spec, const AlgState& phi, const AlgState& psi);

struct QuotientResult {
  double value = 0.0;  // in [lower, upper]
  double lower = 0.0;
  double upper = 0.0;
};

// inf { L(c) : c restricted to `fixed` on the complement of `free_idx` }.
QuotientResult quotient_seminorm(const SeminormSpec& spec, const RVector& fixed,
                                 const std::vector<Index>& free_idx, const conic::Options& opt = {});

struct DualNormResult {
  double value = 0.0;
  CVector maximizer;  // ||x|| + ||Dx|| = 1 attaining Re<v, x> = value
};

// sup { Re<v, x> : ||x|| + ||D x|| <= 1 }.
DualNormResult dual_dnorm(const CVector& v, const HermMatrix& dirac);

}  // namespace qmg
