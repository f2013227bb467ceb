#pragma once

#include <cstdint>
#include <vector>

#include "qmg/matrix.hpp"

namespace qmg {

// Unital *-subalgebra of M_N, stored by a spanning basis plus an HS-orthonormal one.
class FiniteAlgebra {
 public:
  FiniteAlgebra() = default;

  // Validates closure under product and adjoint and that the identity is contained.
  static FiniteAlgebra from_basis(Index ambient_dim, std::vector<CMatrix> basis, double tol = 1e-8);
  static FiniteAlgebra full_matrix(Index n);
  static FiniteAlgebra diagonal(Index n);

  Index ambient_dim() const { return ambient_; }
  Index dim() const { return static_cast<Index>(ortho_.size()); }
  const std::vector<CMatrix>& basis() const { return given_; }
  const std::vector<CMatrix>& orthonormal_basis() const { return ortho_; }
  // Real basis of the self-adjoint part, HS-orthonormal, identity direction first.
  const std::vector<HermMatrix>& sa_basis() const { return sa_; }

  CVector coefficients(const CMatrix& a) const;
  CMatrix project(const CMatrix& a) const;
  double residual(const CMatrix& a) const;
  bool contains(const CMatrix& a, double tol = 1e-8) const;

  RVector sa_coefficients(const HermMatrix& a) const;
  HermMatrix from_sa(const RVector& c) const;

 private:
  Index ambient_ = 0;
  std::vector<CMatrix> given_;
  std::vector<CMatrix> ortho_;
  std::vector<HermMatrix> sa_;
};

// Smallest unital *-algebra containing the generators.
FiniteAlgebra close_algebra(const std::vector<CMatrix>& generators, Index ambient_dim);

// Direct sum A (+) B acting block-diagonally on C^{N_A + N_B}.
FiniteAlgebra direct_sum(const FiniteAlgebra& a, const FiniteAlgebra& b);

// A state given by a density matrix on the ambient space.
class AlgState {
 public:
  AlgState() = default;
  static AlgState from_density(const CMatrix& rho, double tol = 1e-9);

  const HermMatrix& density() const { return rho_; }
  Index dim() const { return rho_.dim(); }
  double eval(const HermMatrix& a) const;
  cplx eval(const CMatrix& a) const;

 private:
  HermMatrix rho_;
};

AlgState pure_state(const CVector& v);
AlgState basis_state(Index n, Index k);
AlgState maximally_mixed(Index n);
AlgState random_state(Index n, std::uint64_t seed);
AlgState random_pure_state(Index n, std::uint64_t seed);
// Block state t rho_a (+) (1-t) rho_b.
AlgState mix_direct_sum(const AlgState& a, const AlgState& b, double t);

}  // namespace qmg
