#include "qmg/tunnel.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "qmg/errors.hpp"
#include "qmg/random.hpp"

namespace qmg {
namespace {

SeminormTerm embed_term(const SeminormTerm& t, Index n_before, Index n_after) {
  SeminormTerm out;
  out.hermitian = t.hermitian;
  out.equality = t.equality;
  const Index r = t.images.front().rows(), c = t.images.front().cols();
  for (Index k = 0; k < n_before; ++k) out.images.push_back(CMatrix::Zero(r, c));
  out.images.insert(out.images.end(), t.images.begin(), t.images.end());
  for (Index k = 0; k < n_after; ++k) out.images.push_back(CMatrix::Zero(r, c));
  return out;
}

HermMatrix embed_block(const HermMatrix& h, Index n_before, Index n_after) {
  const Index n = h.dim();
  CMatrix m = CMatrix::Zero(n_before + n + n_after, n_before + n + n_after);
  m.block(n_before, n_before, n, n) = h.mat();
  return HermMatrix::symmetrized(m);
}


}  // namespace

Tunnel Tunnel::swapped() const {
  Tunnel t = *this;
  std::swap(t.left, t.right);
  t.coupling.left_factor = other(coupling.left_factor);
  for (auto& q : t.quotient_checks) q.side = other(q.side);
  return t;
}

SeminormSpec Tunnel::oriented(Side first) const {
  const SeminormSpec& a = side(first);
  const SeminormSpec& b = side(other(first));
  const Index na = a.size(), nb = b.size();
  const Index Na = a.ambient_dim(), Nb = b.ambient_dim();
  SeminormSpec out;
  for (const auto& h : a.basis) out.basis.push_back(embed_block(h, 0, Nb));
  for (const auto& h : b.basis) out.basis.push_back(embed_block(h, Na, 0));
  for (const auto& t : a.terms) out.terms.push_back(embed_term(t, 0, nb));
  for (const auto& t : b.terms) out.terms.push_back(embed_term(t, na, 0));

  SeminormTerm c;
  switch (coupling.kind) {
    case CouplingKind::Difference:
    case CouplingKind::Equality: {
      if (Na != Nb) throw DomainError("tunnel: difference coupling needs equal dimensions");
      const double k = coupling.kind == CouplingKind::Equality ? 1.0 : coupling.constant;
      c.hermitian = true;
      c.equality = coupling.kind == CouplingKind::Equality;
      for (const auto& h : a.basis) c.images.push_back(k * h.mat());
      for (const auto& h : b.basis) c.images.push_back(-k * h.mat());
      break;
    }
    case CouplingKind::Bridge: {
      // constant * (a x - x b) with a on side left_factor
      const double k = coupling.constant;
      const CMatrix& x = coupling.x;
      auto image = [&](Side s, const HermMatrix& h) -> CMatrix {
        return s == coupling.left_factor ? CMatrix(k * h.mat() * x) : CMatrix(-k * x * h.mat());
      };
      for (const auto& h : a.basis) c.images.push_back(image(first, h));
      for (const auto& h : b.basis) c.images.push_back(image(other(first), h));
      break;
    }
  }
  out.terms.push_back(std::move(c));
  return out;
}

double Tunnel::evaluate(const RVector& lc, const RVector& rc) const {
  RVector c(lc.size() + rc.size());
  c << lc, rc;
  return oriented(Side::Left).evaluate(c);
}

double perturbation_bound(double r, double t_norm) {
  const double x = 2.0 * r * t_norm;
  if (x >= 1.0) throw DomainError("perturbation bound: need ||T|| < 1/(2r)");
  return x / (1.0 - x);
}

Tunnel identity_tunnel(const FiniteSpectralTriple& t) {
  Tunnel tun;
  tun.left = tun.right = lip_seminorm(t);
  tun.coupling.kind = CouplingKind::Equality;
  tun.analytic_bound = 0.0;
  tun.recipe = "identity";
  return tun;
}

Tunnel scalar_tunnel(double c) {
  if (!(c > 0.0)) throw DomainError("scalar tunnel: coupling constant must be positive");
  SeminormSpec point;
  point.basis.push_back(HermMatrix::identity(1));
  Tunnel tun;
  tun.left = tun.right = point;
  tun.coupling = {CouplingKind::Difference, c, {}, Side::Left};
  tun.analytic_bound = 1.0 / c;
  tun.recipe = "scalar";
  return tun;
}

double side_quotient(const Tunnel& tunnel, Side side, const RVector& coeffs, const conic::Options& opt) {
  const SeminormSpec spec = tunnel.oriented(side);
  const Index n1 = tunnel.side(side).size();
  RVector fixed = RVector::Zero(spec.size());
  fixed.head(n1) = coeffs;
  std::vector<Index> free_idx(static_cast<std::size_t>(spec.size() - n1));
  std::iota(free_idx.begin(), free_idx.end(), n1);
  return quotient_seminorm(spec, fixed, free_idx, opt).value;
}

void verify_quotients(Tunnel& tunnel, const TunnelOptions& opt) {
  tunnel.quotient_checks.clear();
  const QuotientSample* worst = nullptr;
  for (Side s : {Side::Left, Side::Right}) {
    const SeminormSpec& spec = tunnel.side(s);
    if (spec.terms.empty()) continue;
    for (int i = 0; i < opt.quotient_samples; ++i) {
      Rng rng(opt.seed, static_cast<std::uint64_t>(i) + (s == Side::Right ? 1000003ULL : 0ULL));
      const RVector c = gaussian_vector(rng, spec.size());
      const double target = spec.evaluate(c);
      if (!(target > 1e-12)) continue;
      const double q = side_quotient(tunnel, s, c, opt.solver);
      tunnel.quotient_checks.push_back({s, target, q, std::abs(q - target) / target});
    }
  }
  for (const auto& q : tunnel.quotient_checks)
    if (!worst || q.rel_error > worst->rel_error) worst = &q;
  if (worst && worst->rel_error > opt.quotient_tol) {
    std::ostringstream os;
    os << "tunnel (" << tunnel.recipe << "): quotient property fails on side "
       << (worst->side == Side::Left ? "left" : "right") << ": seminorm " << worst->target
       << " but inf over lifts " << worst->quotient << " (relative error " << worst->rel_error << ")";
    throw ValidationError(os.str());
  }
}

Tunnel perturbation_tunnel(const FiniteSpectralTriple& t, const HermMatrix& T, const PerturbationOptions& opt) {
  if (T.dim() != t.dim()) throw DomainError("perturbation tunnel: T has wrong dimension");
  const double tn = op_norm(T);
  if (tn == 0.0) return identity_tunnel(t);
  const double r = opt.diameter ? *opt.diameter : diameter(t, opt.diameter_opts).value;
  if (!(2.0 * r * tn < 1.0)) {
    std::ostringstream os;
    os << "perturbation tunnel: need ||T|| < 1/(2r) = " << 1.0 / (2.0 * r) << ", got " << tn;
    throw DomainError(os.str());
  }
  const auto tT = t.with_dirac(t.dirac() + T);
  double rc = r;
  if (opt.radius == CouplingRadius::Perturbed) {
    rc = diameter(tT, opt.diameter_opts).value;
    if (!(2.0 * rc * tn < 1.0)) throw DomainError("perturbation tunnel: need ||T|| < 1/(2 r_T)");
  }
  Tunnel tun;
  tun.left = lip_seminorm(t);
  tun.right = lip_seminorm(tT);
  const double x = 2.0 * rc * tn;
  tun.coupling = {CouplingKind::Difference, (1.0 - x) / x, {}, Side::Left};
  tun.analytic_bound = perturbation_bound(rc, tn);
  tun.recipe = "perturbation";
  verify_quotients(tun, opt.tunnel);
  return tun;
}

Tunnel bridge_tunnel(const FiniteSpectralTriple& t1, const FiniteSpectralTriple& t2, const CMatrix& x,
                     double eps, const TunnelOptions& opt) {
  if (!(eps > 0.0)) throw DomainError("bridge tunnel: epsilon must be positive");
  if (x.rows() != t1.dim() || x.cols() != t2.dim())
    throw DomainError("bridge tunnel: x has wrong shape");
  if (x.rows() != x.cols()) throw DomainError("bridge tunnel: x must be square");
  if (hermitian_defect(x) > 1e-12) throw DomainError("bridge tunnel: x is not self-adjoint");
  const auto ev = herm_eigenvalues(HermMatrix::symmetrized(x));
  if (ev(0) < -1e-12) throw DomainError("bridge tunnel: x is not positive");
  if (std::abs(ev(ev.size() - 1) - 1.0) > 1e-9) throw DomainError("bridge tunnel: ||x|| must be 1");

  Tunnel tun;
  tun.left = lip_seminorm(t1);
  tun.right = lip_seminorm(t2);
  tun.coupling = {CouplingKind::Bridge, 1.0 / eps, x, Side::Left};
  tun.analytic_bound = eps;
  tun.recipe = "bridge";
  try {
    verify_quotients(tun, opt);
  } catch (const ValidationError& e) {
    // locate a witness with a large commutator against x
    std::ostringstream os;
    os << e.what();
    double worst = 0.0;
    for (Side s : {Side::Left, Side::Right}) {
      const auto& spec = tun.side(s);
      for (int i = 0; i < opt.quotient_samples; ++i) {
        Rng rng(opt.seed, static_cast<std::uint64_t>(i) + 7777ULL);
        const RVector c = gaussian_vector(rng, spec.size());
        const double l = spec.evaluate(c);
        if (!(l > 0.0)) continue;
        worst = std::max(worst, op_norm(commutator(x, spec.element(c).mat())) / l);
      }
    }
    os << "; max ||[x,a]||/L(a) on samples = " << worst << " vs epsilon " << eps;
    throw ValidationError(os.str());
  }
  return tun;
}

PullbackDistance pullback_distance(const Tunnel& tunnel, Side target, const AlgState& mu,
                                   const conic::Options& opt) {
  const SeminormSpec spec = tunnel.oriented(target);
  const SeminormSpec& tside = tunnel.side(target);
  const Index n = spec.size(), nt = tside.size(), Nt = tside.ambient_dim();
  if (mu.dim() != spec.ambient_dim()) throw DomainError("pullback distance: state has wrong dimension");

  RMatrix R = RMatrix::Zero(n, n + 1);
  R.leftCols(n).setIdentity();
  conic::Problem prob;
  prob.blocks = seminorm_blocks(spec, R);
  RMatrix psd(2 * Nt * Nt, n + 1);
  psd.setZero();
  for (Index k = 0; k < nt; ++k) psd.col(k) = -realify(tside.basis[k].mat());
  psd.col(n) = realify(CMatrix(CMatrix::Identity(Nt, Nt)));
  prob.blocks.push_back(conic::matrix_block(conic::SetKind::PsdCone, Nt, Nt, psd));
  prob.objective.resize(n + 1);
  for (Index k = 0; k < n; ++k) prob.objective(k) = mu.eval(spec.basis[k]);
  prob.objective(n) = -1.0;

  const auto res = conic::maximize(prob, opt);
  PullbackDistance out;
  out.witness = repair_to_unit_ball(spec, res.x.head(n));
  CMatrix dt = CMatrix::Zero(Nt, Nt);
  for (Index k = 0; k < nt; ++k) dt += out.witness(k) * tside.basis[k].mat();
  const double s = lambda_max(HermMatrix::symmetrized(dt));
  out.value = std::max(0.0, prob.objective.head(n).dot(out.witness) - s);
  out.converged = res.diag.converged;
  return out;
}

namespace {

AlgState sample_mixture(const Tunnel& tun, Side target, int i, std::uint64_t seed, double& weight) {
  const Index Nt = tun.side(target).ambient_dim();
  const Index No = tun.side(other(target)).ambient_dim();
  Rng rng(seed, static_cast<std::uint64_t>(i));
  // extreme weights first, then interior
  weight = i % 4 == 0 ? 0.0 : (i == 1 ? 1.0 : rng.uniform());
  const bool pure = i % 2 == 0;
  const AlgState phi = pure ? pure_state(haar_vector(rng, Nt)) : AlgState::from_density(hs_density(rng, Nt).mat());
  const AlgState psi = pure ? pure_state(haar_vector(rng, No)) : AlgState::from_density(hs_density(rng, No).mat());
  return mix_direct_sum(phi, psi, weight);
}

template <class F>
void run_indexed(int count, Exec exec, F&& f) {
  if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(dynamic)
    for (int i = 0; i < count; ++i) f(i);
  } else {
    for (int i = 0; i < count; ++i) f(i);
  }
}

}  // namespace

ExtentEstimate extent_estimate(const Tunnel& tun, const ExtentOptions& opt) {
  ExtentEstimate est;
  est.analytic_bound = tun.analytic_bound;
  est.options = opt;
  for (Side target : {Side::Left, Side::Right}) {
    const Index nt = tun.side(target).size();
    const Index No = tun.side(other(target)).ambient_dim();
    const SeminormSpec spec = tun.oriented(target);

    std::vector<ExtentSample> outer(static_cast<std::size_t>(opt.outer));
    std::vector<RVector> witness(outer.size());
    run_indexed(opt.outer, opt.exec, [&](int i) {
      double w = 0.0;
      const AlgState mu = sample_mixture(tun, target, i, opt.seed, w);
      const auto d = pullback_distance(tun, target, mu, opt.solver);
      outer[i] = {target, i, 0, w, d.value, d.witness.norm(), d.converged};
      witness[i] = d.witness;
    });

    std::vector<int> order(outer.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return outer[a].distance > outer[b].distance; });
    const int nr = std::min<int>(opt.restarts, static_cast<int>(order.size()));
    std::vector<std::vector<ExtentSample>> chains(static_cast<std::size_t>(nr));
    run_indexed(nr, opt.exec, [&](int r) {
      RVector c = witness[order[r]];
      for (int round = 1; round <= opt.rounds; ++round) {
        // best state on the other block for the current witness
        CMatrix dother = CMatrix::Zero(No, No);
        for (Index k = nt; k < spec.size(); ++k) dother += c(k) * tun.side(other(target)).basis[k - nt].mat();
        const auto eig = herm_eig(HermMatrix::symmetrized(dother));
        const AlgState mu = mix_direct_sum(basis_state(tun.side(target).ambient_dim(), 0),
                                           pure_state(eig.vectors.col(No - 1)), 0.0);
        const auto d = pullback_distance(tun, target, mu, opt.solver);
        chains[r].push_back({target, order[r], round, 0.0, d.value, d.witness.norm(), d.converged});
        c = d.witness;
      }
    });

    double best = 0.0;
    for (const auto& s : outer) best = std::max(best, s.distance);
    for (const auto& ch : chains)
      for (const auto& s : ch) best = std::max(best, s.distance);
    est.direction[static_cast<int>(target)] = best;
    est.samples.insert(est.samples.end(), outer.begin(), outer.end());
    for (const auto& ch : chains) est.samples.insert(est.samples.end(), ch.begin(), ch.end());
  }
  for (const auto& s : est.samples)
    if (!s.converged) ++est.unconverged;
  est.value = std::max(est.direction[0], est.direction[1]);
  return est;
}

}  // namespace qmg
