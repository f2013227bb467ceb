#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

namespace qmg {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;
using Index = Eigen::Index;

inline constexpr double kPi = 3.14159265358979323846;

// Self-adjoint matrix. Construction checks the defect, or symmetrizes explicitly.
class HermMatrix {
 public:
  HermMatrix() = default;
  explicit HermMatrix(const CMatrix& m, double tol = 1e-9);

  static HermMatrix symmetrized(const CMatrix& m);
  static HermMatrix zero(Index n);
  static HermMatrix identity(Index n);
  static HermMatrix diagonal(const RVector& d);

  const CMatrix& mat() const { return m_; }
  Index dim() const { return m_.rows(); }

  HermMatrix operator+(const HermMatrix& o) const;
  HermMatrix operator-(const HermMatrix& o) const;
  HermMatrix operator*(double s) const;

 private:
  struct Unchecked {};
  HermMatrix(CMatrix m, Unchecked) : m_(std::move(m)) {}
  CMatrix m_;
};

struct EigenDecomposition {
  RVector values;   // ascending
  CMatrix vectors;  // columns
};

EigenDecomposition herm_eig(const HermMatrix& h);
RVector herm_eigenvalues(const HermMatrix& h);

double hermitian_defect(const CMatrix& m);
double op_norm(const CMatrix& m);
double op_norm(const HermMatrix& h);
double nuclear_norm(const CMatrix& m);
double hs_norm(const CMatrix& m);
double lambda_max(const HermMatrix& h);

// exp(i t H) from a cached decomposition.
CMatrix unitary_exp(const EigenDecomposition& eig, double t);
CMatrix unitary_exp(const HermMatrix& h, double t);

CMatrix kron(const CMatrix& a, const CMatrix& b);
CMatrix direct_sum(const CMatrix& a, const CMatrix& b);
CMatrix commutator(const CMatrix& a, const CMatrix& b);
CMatrix pauli(int k);  // 0 = identity, 1..3 = sigma_x, sigma_y, sigma_z

// [Re vec(M); Im vec(M)], column-major.
RVector realify(const CMatrix& m);
CMatrix unrealify(const RVector& v, Index rows, Index cols);
RVector realify(const CVector& v);
CVector unrealify(const RVector& v);

}  // namespace qmg
