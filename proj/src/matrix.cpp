#include "qmg/matrix.hpp"

#include <cmath>
#include <string>

#include "qmg/errors.hpp"

namespace qmg {

HermMatrix::HermMatrix(const CMatrix& m, double tol) {
  if (m.rows() != m.cols()) throw DomainError("HermMatrix: matrix is not square");
  const double defect = hermitian_defect(m);
  if (defect > tol * (1.0 + op_norm(m)))
    throw DomainError("HermMatrix: hermitian defect " + std::to_string(defect));
  m_ = 0.5 * (m + m.adjoint());
}

HermMatrix HermMatrix::symmetrized(const CMatrix& m) {
  if (m.rows() != m.cols()) throw DomainError("HermMatrix: matrix is not square");
  return HermMatrix(CMatrix(0.5 * (m + m.adjoint())), Unchecked{});
}

HermMatrix HermMatrix::zero(Index n) { return HermMatrix(CMatrix::Zero(n, n), Unchecked{}); }
HermMatrix HermMatrix::identity(Index n) { return HermMatrix(CMatrix::Identity(n, n), Unchecked{}); }

HermMatrix HermMatrix::diagonal(const RVector& d) {
  return HermMatrix(CMatrix(d.cast<cplx>().asDiagonal()), Unchecked{});
}

HermMatrix HermMatrix::operator+(const HermMatrix& o) const {
  if (dim() != o.dim()) throw DomainError("HermMatrix: dimension mismatch");
  return HermMatrix(CMatrix(m_ + o.m_), Unchecked{});
}

HermMatrix HermMatrix::operator-(const HermMatrix& o) const {
  if (dim() != o.dim()) throw DomainError("HermMatrix: dimension mismatch");
  return HermMatrix(CMatrix(m_ - o.m_), Unchecked{});
}

HermMatrix HermMatrix::operator*(double s) const { return HermMatrix(CMatrix(m_ * s), Unchecked{}); }

EigenDecomposition herm_eig(const HermMatrix& h) {
  if (h.dim() == 0) return {};
  Eigen::SelfAdjointEigenSolver<CMatrix> es(h.mat());
  if (es.info() != Eigen::Success) throw SolverError("herm_eig: eigensolver did not converge");
  return {es.eigenvalues(), es.eigenvectors()};
}

RVector herm_eigenvalues(const HermMatrix& h) {
  if (h.dim() == 0) return {};
  Eigen::SelfAdjointEigenSolver<CMatrix> es(h.mat(), Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw SolverError("herm_eig: eigensolver did not converge");
  return es.eigenvalues();
}

double hermitian_defect(const CMatrix& m) {
  if (m.size() == 0) return 0.0;
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

double op_norm(const CMatrix& m) {
  if (m.size() == 0) return 0.0;
  if (m.rows() == 1 || m.cols() == 1) return m.norm();
  Eigen::JacobiSVD<CMatrix> svd(m);
  return svd.singularValues()(0);
}

double op_norm(const HermMatrix& h) {
  if (h.dim() == 0) return 0.0;
  const RVector ev = herm_eigenvalues(h);
  return std::max(std::abs(ev(0)), std::abs(ev(ev.size() - 1)));
}

double nuclear_norm(const CMatrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<CMatrix> svd(m);
  return svd.singularValues().sum();
}

double hs_norm(const CMatrix& m) { return m.norm(); }

double lambda_max(const HermMatrix& h) {
  const RVector ev = herm_eigenvalues(h);
  return ev(ev.size() - 1);
}

CMatrix unitary_exp(const EigenDecomposition& eig, double t) {
  const Index n = eig.values.size();
  CVector phase(n);
  for (Index k = 0; k < n; ++k) phase(k) = std::polar(1.0, t * eig.values(k));
  return eig.vectors * phase.asDiagonal() * eig.vectors.adjoint();
}

CMatrix unitary_exp(const HermMatrix& h, double t) { return unitary_exp(herm_eig(h), t); }

CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

CMatrix direct_sum(const CMatrix& a, const CMatrix& b) {
  CMatrix out = CMatrix::Zero(a.rows() + b.rows(), a.cols() + b.cols());
  out.topLeftCorner(a.rows(), a.cols()) = a;
  out.bottomRightCorner(b.rows(), b.cols()) = b;
  return out;
}

CMatrix commutator(const CMatrix& a, const CMatrix& b) { return a * b - b * a; }

CMatrix pauli(int k) {
  const cplx i{0.0, 1.0};
  CMatrix p(2, 2);
  switch (k) {
    case 0: p << 1, 0, 0, 1; break;
    case 1: p << 0, 1, 1, 0; break;
    case 2: p << 0, -i, i, 0; break;
    case 3: p << 1, 0, 0, -1; break;
    default: throw DomainError("pauli: index must be 0..3");
  }
  return p;
}

RVector realify(const CMatrix& m) {
  const Index n = m.size();
  RVector v(2 * n);
  for (Index k = 0; k < n; ++k) {
    v(k) = m.data()[k].real();
    v(n + k) = m.data()[k].imag();
  }
  return v;
}

CMatrix unrealify(const RVector& v, Index rows, Index cols) {
  const Index n = rows * cols;
  if (v.size() != 2 * n) throw DomainError("unrealify: size mismatch");
  CMatrix m(rows, cols);
  for (Index k = 0; k < n; ++k) m.data()[k] = {v(k), v(n + k)};
  return m;
}

RVector realify(const CVector& v) { return realify(CMatrix(v)); }

CVector unrealify(const RVector& v) { return unrealify(v, v.size() / 2, 1); }

}  // namespace qmg
