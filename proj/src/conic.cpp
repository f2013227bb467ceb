#include "qmg/conic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "qmg/errors.hpp"

namespace qmg::conic {
namespace {

bool is_ball(SetKind k) {
  return k == SetKind::SpectralBall || k == SetKind::HermitianSpectralBall ||
         k == SetKind::EuclideanBall;
}

// Support function of the set; nullopt where no closed form is used.
std::optional<double> support(const Block& b, const RVector& y) {
  switch (b.kind) {
    case SetKind::SpectralBall:
      return nuclear_norm(unrealify(y, b.rows, b.cols));
    case SetKind::HermitianSpectralBall: {
      const RVector ev = herm_eigenvalues(HermMatrix::symmetrized(unrealify(y, b.rows, b.cols)));
      return ev.cwiseAbs().sum();
    }
    case SetKind::EuclideanBall:
      return y.norm();
    case SetKind::Zero:
      return 0.0;
    default:
      return std::nullopt;
  }
}

}  // namespace

Block matrix_block(SetKind kind, Index rows, Index cols, RMatrix map, RVector offset) {
  Block b;
  b.kind = kind;
  b.rows = rows;
  b.cols = cols;
  if (map.rows() != 2 * rows * cols) throw DomainError("matrix_block: map has wrong row count");
  b.offset = offset.size() == 0 ? RVector::Zero(map.rows()) : std::move(offset);
  b.map = std::move(map);
  if (b.offset.size() != b.map.rows()) throw DomainError("matrix_block: offset size mismatch");
  return b;
}

Block vector_block(SetKind kind, RMatrix map, RVector offset) {
  Block b;
  b.kind = kind;
  b.offset = offset.size() == 0 ? RVector::Zero(map.rows()) : std::move(offset);
  b.map = std::move(map);
  if (b.offset.size() != b.map.rows()) throw DomainError("vector_block: offset size mismatch");
  return b;
}

RVector project(const Block& b, const RVector& v) {
  switch (b.kind) {
    case SetKind::SpectralBall: {
      const CMatrix m = unrealify(v, b.rows, b.cols);
      Eigen::JacobiSVD<CMatrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
      const RVector s = svd.singularValues().cwiseMin(1.0);
      return realify(CMatrix(svd.matrixU() * s.cast<cplx>().asDiagonal() * svd.matrixV().adjoint()));
    }
    case SetKind::HermitianSpectralBall:
    case SetKind::PsdCone: {
      const auto eig = herm_eig(HermMatrix::symmetrized(unrealify(v, b.rows, b.cols)));
      const RVector s = b.kind == SetKind::PsdCone ? RVector(eig.values.cwiseMax(0.0))
                                                   : RVector(eig.values.cwiseMax(-1.0).cwiseMin(1.0));
      return realify(CMatrix(eig.vectors * s.cast<cplx>().asDiagonal() * eig.vectors.adjoint()));
    }
    case SetKind::EuclideanBall: {
      const double n = v.norm();
      return n > 1.0 ? RVector(v / n) : v;
    }
    case SetKind::SecondOrderCone: {
      const double t = v(0);
      const double n = v.tail(v.size() - 1).norm();
      if (n <= t) return v;
      if (n <= -t) return RVector::Zero(v.size());
      RVector out(v.size());
      const double a = 0.5 * (t + n);
      out(0) = a;
      out.tail(v.size() - 1) = (a / n) * v.tail(v.size() - 1);
      return out;
    }
    case SetKind::Nonnegative:
      return v.cwiseMax(0.0);
    case SetKind::Zero:
      return RVector::Zero(v.size());
  }
  return v;
}

double gauge(const Block& b, const RVector& v) {
  switch (b.kind) {
    case SetKind::SpectralBall:
      return op_norm(unrealify(v, b.rows, b.cols));
    case SetKind::HermitianSpectralBall:
      return op_norm(HermMatrix::symmetrized(unrealify(v, b.rows, b.cols)));
    case SetKind::EuclideanBall:
      return v.norm();
    case SetKind::Zero:
      return v.norm() == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    default:
      throw DomainError("gauge: set is not a bounded ball");
  }
}

Result maximize(const Problem& problem, const Options& opt) {
  const Index n = problem.objective.size();
  Index m = 0;
  for (const auto& b : problem.blocks) {
    if (b.map.cols() != n) throw DomainError("conic: block map has wrong column count");
    m += b.size();
  }
  RMatrix A(m, n);
  RVector off(m);
  {
    Index r = 0;
    for (const auto& b : problem.blocks) {
      A.middleRows(r, b.size()) = b.map;
      off.segment(r, b.size()) = b.offset;
      r += b.size();
    }
  }

  // restrict to the complement of ker A, whitened so the constraint map has orthonormal columns
  Eigen::SelfAdjointEigenSolver<RMatrix> es(A.transpose() * A);
  const RVector lam = es.eigenvalues();
  const double lam_max = lam.size() ? std::max(lam.maxCoeff(), 0.0) : 0.0;
  const double cut = opt.kernel_tol * std::max(lam_max, 1e-300);
  std::vector<Index> keep;
  double ker_obj = 0.0;
  for (Index k = 0; k < lam.size(); ++k) {
    const double proj = es.eigenvectors().col(k).dot(problem.objective);
    if (lam(k) > cut)
      keep.push_back(k);
    else
      ker_obj = std::max(ker_obj, std::abs(proj));
  }
  if (ker_obj > 1e-8 * (1.0 + problem.objective.norm()))
    throw UnboundedError("conic: objective has a component along the constraint kernel");

  const Index r = static_cast<Index>(keep.size());
  RMatrix W(n, r);
  for (Index k = 0; k < r; ++k) W.col(k) = es.eigenvectors().col(keep[k]) / std::sqrt(lam(keep[k]));
  const RMatrix At = A * W;
  const RVector ft = W.transpose() * problem.objective;

  auto project_all = [&](const RVector& v) {
    RVector out(m);
    Index row = 0;
    for (const auto& b : problem.blocks) {
      out.segment(row, b.size()) = project(b, v.segment(row, b.size()));
      row += b.size();
    }
    return out;
  };

  double rho = opt.rho;
  RVector z = project_all(off);
  RVector u = RVector::Zero(m);
  RVector w = RVector::Zero(r);
  Diagnostics diag;
  const double sqrt_m = std::sqrt(static_cast<double>(std::max<Index>(m, 1)));
  const double sqrt_r = std::sqrt(static_cast<double>(std::max<Index>(r, 1)));

  int it = 0;
  for (; it < opt.max_iters; ++it) {
    w = At.transpose() * (z - off - u) + ft / rho;
    const RVector Aw = At * w;
    const RVector Aw_hat = opt.alpha * Aw + (1.0 - opt.alpha) * (z - off);
    const RVector z_old = z;
    z = project_all(Aw_hat + off + u);
    u += Aw_hat + off - z;

    if ((it + 1) % opt.check_every != 0) continue;
    const double rp = (Aw + off - z).norm();
    const double rd = rho * (At.transpose() * (z - z_old)).norm();
    const double eps_p = opt.eps_abs * sqrt_m + opt.eps_rel * std::max({Aw.norm(), z.norm(), off.norm()});
    const double eps_d = opt.eps_abs * sqrt_r + opt.eps_rel * rho * (At.transpose() * u).norm();
    diag.primal_residual = rp;
    diag.dual_residual = rd;
    if (rp <= eps_p && rd <= eps_d) {
      diag.converged = true;
      ++it;
      break;
    }
    if (opt.adaptive_rho && (it + 1) % (5 * opt.check_every) == 0) {
      const double sp = rp / eps_p, sd = rd / eps_d;
      if (sp > 10.0 * sd) {
        rho *= 2.0;
        u /= 2.0;
      } else if (sd > 10.0 * sp) {
        rho /= 2.0;
        u *= 2.0;
      }
    }
  }
  diag.iterations = it;

  Result res;
  res.x = W * w;

  // dual certificate when every block has a closed-form support function
  bool certifiable = true;
  for (const auto& b : problem.blocks)
    certifiable = certifiable && (is_ball(b.kind) || b.kind == SetKind::Zero);
  if (certifiable) {
    RVector y = rho * u;
    y += At * (ft - At.transpose() * y);
    double ub = -y.dot(off);
    Index row = 0;
    for (const auto& b : problem.blocks) {
      ub += *support(b, y.segment(row, b.size()));
      row += b.size();
    }
    diag.upper_bound = ub;
  }

  // feasibility repair for homogeneous ball/equality problems
  bool homogeneous = off.norm() == 0.0;
  for (const auto& b : problem.blocks)
    homogeneous = homogeneous && (is_ball(b.kind) || b.kind == SetKind::Zero);
  if (homogeneous) {
    std::vector<const Block*> zeros;
    Index zr = 0;
    for (const auto& b : problem.blocks)
      if (b.kind == SetKind::Zero) {
        zeros.push_back(&b);
        zr += b.size();
      }
    if (zr > 0) {
      RMatrix Z(zr, n);
      Index row = 0;
      for (const auto* b : zeros) {
        Z.middleRows(row, b->size()) = b->map;
        row += b->size();
      }
      Eigen::JacobiSVD<RMatrix> svd(Z, Eigen::ComputeFullV);
      const double smax = svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
      Index rank = 0;
      for (Index k = 0; k < svd.singularValues().size(); ++k)
        if (svd.singularValues()(k) > 1e-10 * std::max(smax, 1e-300)) ++rank;
      const RMatrix V = svd.matrixV().rightCols(n - rank);
      res.x = V * (V.transpose() * res.x);
    }
    double g = 0.0;
    for (const auto& b : problem.blocks)
      if (b.kind != SetKind::Zero) g = std::max(g, gauge(b, b.map * res.x));
    if (g > 1.0) res.x /= g;
    diag.status = "repaired";
  } else {
    diag.status = "raw";
  }
  res.value = problem.objective.dot(res.x);
  if (diag.upper_bound) {
    diag.gap = *diag.upper_bound - res.value;
    if (!diag.converged && diag.gap <= opt.gap_tol * (1.0 + std::abs(res.value))) diag.converged = true;
  }
  if (!diag.converged) diag.status = "not_converged";
  res.diag = diag;
  return res;
}

}  // namespace qmg::conic
