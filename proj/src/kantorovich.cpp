#include "qmg/kantorovich.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "qmg/errors.hpp"

namespace qmg {
namespace {

double term_norm(const SeminormTerm& t, const RVector& c) {
  CMatrix m = CMatrix::Zero(t.images.front().rows(), t.images.front().cols());
  for (Index k = 0; k < c.size(); ++k)
    if (c(k) != 0.0) m += c(k) * t.images[k];
  if (t.hermitian) return op_norm(HermMatrix::symmetrized(m));
  return op_norm(m);
}

}  // namespace

double SeminormSpec::evaluate(const RVector& c) const {
  if (c.size() != size()) throw DomainError("seminorm: coefficient length mismatch");
  double v = 0.0;
  for (const auto& t : terms) {
    const double n = term_norm(t, c);
    if (t.equality) {
      if (n > 1e-12 * (1.0 + c.norm())) return std::numeric_limits<double>::infinity();
    } else {
      v = std::max(v, n);
    }
  }
  return v;
}

double SeminormSpec::evaluate(const HermMatrix& a) const { return evaluate(coefficients(a)); }

RVector SeminormSpec::coefficients(const HermMatrix& a) const {
  if (a.dim() != ambient_dim()) throw DomainError("seminorm: element has wrong dimension");
  RVector c(size());
  CMatrix rest = a.mat();
  for (Index k = 0; k < size(); ++k) {
    c(k) = (basis[k].mat() * a.mat()).trace().real();
    rest -= c(k) * basis[k].mat();
  }
  if (rest.norm() > 1e-8 * (1.0 + a.mat().norm()))
    throw DomainError("seminorm: element is not in the domain");
  return c;
}

HermMatrix SeminormSpec::element(const RVector& c) const {
  if (c.size() != size()) throw DomainError("seminorm: coefficient length mismatch");
  CMatrix m = CMatrix::Zero(ambient_dim(), ambient_dim());
  for (Index k = 0; k < size(); ++k) m += c(k) * basis[k].mat();
  return HermMatrix::symmetrized(m);
}

SeminormSpec lip_seminorm(const FiniteSpectralTriple& t) {
  SeminormSpec spec;
  spec.basis = t.algebra().sa_basis();
  SeminormTerm term;
  term.hermitian = true;
  const cplx i{0.0, 1.0};
  for (const auto& h : spec.basis) term.images.push_back(i * commutator(t.dirac().mat(), h.mat()));
  spec.terms.push_back(std::move(term));
  return spec;
}

std::vector<conic::Block> seminorm_blocks(const SeminormSpec& spec, const RMatrix& R) {
  if (R.rows() != spec.size()) throw DomainError("seminorm_blocks: map has wrong row count");
  std::vector<conic::Block> blocks;
  for (const auto& t : spec.terms) {
    const Index rows = t.images.front().rows(), cols = t.images.front().cols();
    RMatrix img(2 * rows * cols, spec.size());
    for (Index k = 0; k < spec.size(); ++k) img.col(k) = realify(t.images[k]);
    const auto kind = t.equality ? conic::SetKind::Zero
                      : t.hermitian ? conic::SetKind::HermitianSpectralBall
                                    : conic::SetKind::SpectralBall;
    blocks.push_back(conic::matrix_block(kind, rows, cols, img * R));
  }
  return blocks;
}

RVector project_equalities(const SeminormSpec& spec, RVector c) {
  const Index n = spec.size();
  Index zr = 0;
  for (const auto& t : spec.terms)
    if (t.equality) zr += 2 * t.images.front().size();
  if (zr > 0) {
    RMatrix Z(zr, n);
    Index row = 0;
    for (const auto& t : spec.terms) {
      if (!t.equality) continue;
      const Index sz = 2 * t.images.front().size();
      for (Index k = 0; k < n; ++k) Z.block(row, k, sz, 1) = realify(t.images[k]);
      row += sz;
    }
    Eigen::JacobiSVD<RMatrix> svd(Z, Eigen::ComputeFullV);
    const RVector& s = svd.singularValues();
    const double smax = s.size() ? s(0) : 0.0;
    Index rank = 0;
    for (Index k = 0; k < s.size(); ++k)
      if (s(k) > 1e-10 * std::max(smax, 1e-300)) ++rank;
    const RMatrix V = svd.matrixV().rightCols(n - rank);
    c = V * (V.transpose() * c);
  }
  return c;
}

RVector repair_to_unit_ball(const SeminormSpec& spec, RVector c) {
  c = project_equalities(spec, std::move(c));
  double g = 0.0;
  for (const auto& t : spec.terms)
    if (!t.equality) g = std::max(g, term_norm(t, c));
  if (g > 1.0) c /= g;
  return c;
}

RVector state_gradient(const SeminormSpec& spec, const AlgState& phi, const AlgState& psi) {
  if (phi.dim() != spec.ambient_dim() || psi.dim() != spec.ambient_dim())
    throw DomainError("mk_distance: state dimension does not match the algebra");
  RVector g(spec.size());
  const CMatrix diff = phi.density().mat() - psi.density().mat();
  for (Index k = 0; k < spec.size(); ++k) g(k) = (diff * spec.basis[k].mat()).trace().real();
  return g;
}

MkResult mk_distance(const SeminormSpec& spec, const AlgState& phi, const AlgState& psi,
                     const conic::Options& opt) {
  conic::Problem prob;
  prob.objective = state_gradient(spec, phi, psi);
  prob.blocks = seminorm_blocks(spec, RMatrix::Identity(spec.size(), spec.size()));
  const auto res = conic::maximize(prob, opt);
  MkResult out;
  out.witness = repair_to_unit_ball(spec, res.x);
  out.value = prob.objective.dot(out.witness);
  out.diag = res.diag;
  out.upper_bound = res.diag.upper_bound.value_or(std::numeric_limits<double>::infinity());
  out.diag.gap = out.upper_bound - out.value;
  if (!out.diag.converged)
    throw SolverError("mk_distance: solver did not converge (gap " + std::to_string(out.diag.gap) + ")");
  return out;
}

MkResult mk_distance(const FiniteSpectralTriple& t, const AlgState& phi, const AlgState& psi,
                     const conic::Options& opt) {
  return mk_distance(lip_seminorm(t), phi, psi, opt);
}

QuotientResult quotient_seminorm(const SeminormSpec& spec, const RVector& fixed,
                                 const std::vector<Index>& free_idx, const conic::Options& opt) {
  const Index n = spec.size();
  if (fixed.size() != n) throw DomainError("quotient_seminorm: fixed vector has wrong length");
  const Index nf = static_cast<Index>(free_idx.size());
  RMatrix R = RMatrix::Zero(n, 1 + nf);
  R.col(0) = fixed;
  for (Index j = 0; j < nf; ++j) {
    R(free_idx[j], 0) = 0.0;
    R(free_idx[j], 1 + j) = 1.0;
  }
  conic::Problem prob;
  prob.objective = RVector::Zero(1 + nf);
  prob.objective(0) = 1.0;
  prob.blocks = seminorm_blocks(spec, R);
  QuotientResult q;
  try {
    const auto res = conic::maximize(prob, opt);
    // x is already repaired onto the feasible set
    const double s = res.x(0);
    const double ub = res.diag.upper_bound.value_or(std::numeric_limits<double>::infinity());
    q.upper = s > 0.0 ? 1.0 / s : std::numeric_limits<double>::infinity();
    q.lower = std::isfinite(ub) && ub > 0.0 ? 1.0 / ub : 0.0;
    q.value = std::isfinite(q.upper) ? q.upper : q.lower;
  } catch (const UnboundedError&) {
    q = {};
  }
  return q;
}

DualNormResult dual_dnorm(const CVector& v, const HermMatrix& dirac) {
  if (v.size() != dirac.dim()) throw DomainError("dual_dnorm: dimension mismatch");
  DualNormResult out;
  out.maximizer = CVector::Zero(v.size());
  if (v.norm() == 0.0) return out;
  const auto eig = herm_eig(dirac);
  const CVector w = eig.vectors.adjoint() * v;
  const RVector lam2 = eig.values.cwiseAbs2();
  const double tiny = 1e-24 * std::max(lam2.maxCoeff(), 1e-300);
  const RVector a = w.cwiseAbs2();

  auto f = [&](double mu) {
    double s = 0.0;
    for (Index i = 0; i < a.size(); ++i) {
      const double r = lam2(i) <= tiny ? 1.0 : mu / (lam2(i) + mu);
      s += a(i) * r * r;
    }
    return std::sqrt(s);
  };
  auto g = [&](double mu) {
    double s = 0.0;
    for (Index i = 0; i < a.size(); ++i)
      if (lam2(i) > tiny) s += a(i) * lam2(i) / ((lam2(i) + mu) * (lam2(i) + mu));
    return std::sqrt(s);
  };

  double mu = 0.0;
  if (f(0.0) < g(0.0)) {
    double lo = 1.0, hi = 1.0;
    while (f(hi) < g(hi)) hi *= 2.0;
    while (f(lo) > g(lo) && lo > 1e-300) lo *= 0.5;
    for (int it = 0; it < 200 && hi / lo > 1.0 + 1e-15; ++it) {
      const double mid = std::sqrt(lo * hi);
      (f(mid) < g(mid) ? lo : hi) = mid;
    }
    mu = std::sqrt(lo * hi);
  }
  CVector p(w.size());
  for (Index i = 0; i < w.size(); ++i)
    p(i) = lam2(i) <= tiny ? w(i) : w(i) * (mu / (lam2(i) + mu));
  const CVector x = eig.vectors * p;
  const double nx = dnorm(dirac, x);
  out.maximizer = x / nx;
  out.value = std::max(f(mu), g(mu));
  return out;
}

}  // namespace qmg
