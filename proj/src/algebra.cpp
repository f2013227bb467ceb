#include "qmg/algebra.hpp"

#include <cmath>
#include <string>

#include "qmg/errors.hpp"
#include "qmg/random.hpp"

namespace qmg {
namespace {

cplx hs_inner(const CMatrix& a, const CMatrix& b) { return (a.adjoint() * b).trace(); }

// Gram-Schmidt (twice) of x against an orthonormal list; returns false if x is dependent.
bool orthonormalize_into(std::vector<CMatrix>& basis, CMatrix x, double tol) {
  const double scale = x.norm();
  if (scale == 0.0) return false;
  for (int pass = 0; pass < 2; ++pass)
    for (const auto& b : basis) x -= hs_inner(b, x) * b;
  const double r = x.norm();
  if (r <= tol * scale) return false;
  basis.push_back(x / r);
  return true;
}

std::vector<HermMatrix> build_sa_basis(const std::vector<CMatrix>& ortho, Index n) {
  std::vector<CMatrix> sa;
  orthonormalize_into(sa, CMatrix::Identity(n, n), 1e-12);
  const cplx i{0.0, 1.0};
  for (const auto& b : ortho) {
    if (sa.size() == ortho.size()) break;
    orthonormalize_into(sa, CMatrix(0.5 * (b + b.adjoint())), 1e-9);
    if (sa.size() == ortho.size()) break;
    orthonormalize_into(sa, CMatrix((b - b.adjoint()) / (2.0 * i)), 1e-9);
  }
  if (sa.size() != ortho.size()) throw SolverError("sa_basis: could not span self-adjoint part");
  std::vector<HermMatrix> out;
  out.reserve(sa.size());
  for (auto& m : sa) out.push_back(HermMatrix::symmetrized(m));
  return out;
}

}  // namespace

FiniteAlgebra FiniteAlgebra::from_basis(Index ambient_dim, std::vector<CMatrix> basis, double tol) {
  if (ambient_dim <= 0) throw DomainError("FiniteAlgebra: ambient dimension must be positive");
  if (basis.empty()) throw DomainError("FiniteAlgebra: empty basis");
  FiniteAlgebra alg;
  alg.ambient_ = ambient_dim;
  for (const auto& b : basis) {
    if (b.rows() != ambient_dim || b.cols() != ambient_dim)
      throw DomainError("FiniteAlgebra: basis element has wrong shape");
    if (!orthonormalize_into(alg.ortho_, b, 1e-10))
      throw DomainError("FiniteAlgebra: basis is linearly dependent");
  }
  alg.given_ = std::move(basis);

  auto check = [&](const CMatrix& m, const char* what) {
    const double r = alg.residual(m);
    if (r > tol * (1.0 + m.norm()))
      throw ValidationError(std::string("FiniteAlgebra: not closed under ") + what +
                            " (residual " + std::to_string(r) + ")");
  };
  check(CMatrix::Identity(ambient_dim, ambient_dim), "unit");
  for (const auto& a : alg.ortho_) {
    check(a.adjoint(), "adjoint");
    for (const auto& b : alg.ortho_) check(a * b, "product");
  }
  alg.sa_ = build_sa_basis(alg.ortho_, ambient_dim);
  return alg;
}

FiniteAlgebra FiniteAlgebra::full_matrix(Index n) {
  std::vector<CMatrix> basis;
  for (Index j = 0; j < n; ++j)
    for (Index i = 0; i < n; ++i) {
      CMatrix e = CMatrix::Zero(n, n);
      e(i, j) = 1.0;
      basis.push_back(e);
    }
  return from_basis(n, std::move(basis));
}

FiniteAlgebra FiniteAlgebra::diagonal(Index n) {
  std::vector<CMatrix> basis;
  for (Index i = 0; i < n; ++i) {
    CMatrix e = CMatrix::Zero(n, n);
    e(i, i) = 1.0;
    basis.push_back(e);
  }
  return from_basis(n, std::move(basis));
}

CVector FiniteAlgebra::coefficients(const CMatrix& a) const {
  if (a.rows() != ambient_ || a.cols() != ambient_) throw DomainError("coefficients: wrong shape");
  CVector c(dim());
  for (Index k = 0; k < dim(); ++k) c(k) = hs_inner(ortho_[k], a);
  return c;
}

CMatrix FiniteAlgebra::project(const CMatrix& a) const {
  const CVector c = coefficients(a);
  CMatrix p = CMatrix::Zero(ambient_, ambient_);
  for (Index k = 0; k < dim(); ++k) p += c(k) * ortho_[k];
  return p;
}

double FiniteAlgebra::residual(const CMatrix& a) const { return (a - project(a)).norm(); }

bool FiniteAlgebra::contains(const CMatrix& a, double tol) const {
  return residual(a) <= tol * (1.0 + a.norm());
}

RVector FiniteAlgebra::sa_coefficients(const HermMatrix& a) const {
  if (a.dim() != ambient_) throw DomainError("sa_coefficients: wrong shape");
  RVector c(dim());
  for (Index k = 0; k < dim(); ++k) c(k) = hs_inner(sa_[k].mat(), a.mat()).real();
  return c;
}

HermMatrix FiniteAlgebra::from_sa(const RVector& c) const {
  if (c.size() != dim()) throw DomainError("from_sa: coefficient length mismatch");
  CMatrix m = CMatrix::Zero(ambient_, ambient_);
  for (Index k = 0; k < dim(); ++k) m += c(k) * sa_[k].mat();
  return HermMatrix::symmetrized(m);
}

FiniteAlgebra close_algebra(const std::vector<CMatrix>& generators, Index n) {
  std::vector<CMatrix> ortho;
  orthonormalize_into(ortho, CMatrix::Identity(n, n), 1e-12);
  for (const auto& g : generators) {
    if (g.rows() != n || g.cols() != n) throw DomainError("close_algebra: generator has wrong shape");
    orthonormalize_into(ortho, g, 1e-9);
    orthonormalize_into(ortho, CMatrix(g.adjoint()), 1e-9);
  }
  const std::size_t cap = static_cast<std::size_t>(n * n);
  std::size_t done = 0;
  while (done < ortho.size()) {
    // products of the new elements with everything so far
    const std::size_t end = ortho.size();
    for (std::size_t i = done; i < end; ++i)
      for (std::size_t j = 0; j < end; ++j) {
        if (ortho.size() >= cap) break;
        orthonormalize_into(ortho, CMatrix(ortho[i] * ortho[j]), 1e-9);
        orthonormalize_into(ortho, CMatrix(ortho[j] * ortho[i]), 1e-9);
      }
    done = end;
    if (ortho.size() > cap) throw SolverError("close_algebra: dimension exceeded N^2");
  }
  return FiniteAlgebra::from_basis(n, std::move(ortho));
}

FiniteAlgebra direct_sum(const FiniteAlgebra& a, const FiniteAlgebra& b) {
  const Index na = a.ambient_dim(), nb = b.ambient_dim();
  std::vector<CMatrix> basis;
  for (const auto& x : a.orthonormal_basis()) basis.push_back(direct_sum(x, CMatrix::Zero(nb, nb)));
  for (const auto& y : b.orthonormal_basis()) basis.push_back(direct_sum(CMatrix::Zero(na, na), y));
  return FiniteAlgebra::from_basis(na + nb, std::move(basis));
}

AlgState AlgState::from_density(const CMatrix& rho, double tol) {
  HermMatrix h(rho, tol);
  const double tr = h.mat().trace().real();
  if (std::abs(tr - 1.0) > tol) throw DomainError("AlgState: trace is not 1");
  const RVector ev = herm_eigenvalues(h);
  if (ev(0) < -tol) throw DomainError("AlgState: density is not positive");
  AlgState s;
  s.rho_ = std::move(h);
  return s;
}

double AlgState::eval(const HermMatrix& a) const {
  if (a.dim() != dim()) throw DomainError("AlgState: dimension mismatch");
  return (rho_.mat() * a.mat()).trace().real();
}

cplx AlgState::eval(const CMatrix& a) const {
  if (a.rows() != dim()) throw DomainError("AlgState: dimension mismatch");
  return (rho_.mat() * a).trace();
}

AlgState pure_state(const CVector& v) {
  const double n = v.norm();
  if (n == 0.0) throw DomainError("pure_state: zero vector");
  const CVector u = v / n;
  return AlgState::from_density(u * u.adjoint());
}

AlgState basis_state(Index n, Index k) {
  if (k < 0 || k >= n) throw DomainError("basis_state: index out of range");
  CVector e = CVector::Zero(n);
  e(k) = 1.0;
  return pure_state(e);
}

AlgState maximally_mixed(Index n) {
  return AlgState::from_density(CMatrix::Identity(n, n) / static_cast<double>(n));
}

AlgState random_state(Index n, std::uint64_t seed) {
  Rng rng(seed);
  return AlgState::from_density(hs_density(rng, n).mat());
}

AlgState random_pure_state(Index n, std::uint64_t seed) {
  Rng rng(seed);
  return pure_state(haar_vector(rng, n));
}

AlgState mix_direct_sum(const AlgState& a, const AlgState& b, double t) {
  if (t < 0.0 || t > 1.0) throw DomainError("mix_direct_sum: weight outside [0,1]");
  return AlgState::from_density(direct_sum(CMatrix(t * a.density().mat()),
                                           CMatrix((1.0 - t) * b.density().mat())));
}

}  // namespace qmg
