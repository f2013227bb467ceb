#include "qmg/modular.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "qmg/errors.hpp"
#include "qmg/random.hpp"

namespace qmg {
namespace {

// Real matrix of v -> P v in the realify() layout.
RMatrix realify_linear(const CMatrix& P) {
  const Index k = P.rows(), m = P.cols();
  RMatrix R(2 * k, 2 * m);
  R.topLeftCorner(k, m) = P.real();
  R.topRightCorner(k, m) = -P.imag();
  R.bottomLeftCorner(k, m) = P.imag();
  R.bottomRightCorner(k, m) = P.real();
  return R;
}

RMatrix select_cols(Index rows, Index n, Index first) {
  RMatrix S = RMatrix::Zero(rows, n);
  S.block(0, first, rows, rows).setIdentity();
  return S;
}

RMatrix unit_row(Index n, Index k, double v = 1.0) {
  RMatrix r = RMatrix::Zero(1, n);
  r(0, k) = v;
  return r;
}

RMatrix stack(const RMatrix& a, const RMatrix& b) {
  RMatrix out(a.rows() + b.rows(), a.cols());
  out << a, b;
  return out;
}

// ||v|| <= s, ||D v|| <= t, s + t <= 1 with v = V x.
void add_sum_dnorm(conic::Problem& p, const HermMatrix& D, const RMatrix& V, Index s, Index t) {
  const Index n = V.cols();
  p.blocks.push_back(conic::vector_block(conic::SetKind::SecondOrderCone, stack(unit_row(n, s), V)));
  p.blocks.push_back(conic::vector_block(conic::SetKind::SecondOrderCone,
                                         stack(unit_row(n, t), realify_linear(D.mat()) * V)));
  RMatrix row = RMatrix::Zero(1, n);
  row(0, s) = row(0, t) = -1.0;
  p.blocks.push_back(conic::vector_block(conic::SetKind::Nonnegative, row, RVector::Ones(1)));
}

void add_coupling(conic::Problem& p, const DNorm& d, const RMatrix& V1, const RMatrix& V2) {
  if (d.coupling == CouplingKind::Equality) {
    p.blocks.push_back(conic::vector_block(conic::SetKind::Zero, V1 - V2));
  } else {
    p.blocks.push_back(conic::vector_block(conic::SetKind::EuclideanBall,
                                           d.constant * realify_linear(d.x) * (V1 - V2)));
  }
}

// Split, enforce equality, scale into the unit ball.
std::pair<CVector, CVector> repair_pair(const DNorm& d, CVector a, CVector b) {
  if (d.coupling == CouplingKind::Equality) {
    a = b = 0.5 * (a + b);
  }
  CVector z(a.size() + b.size());
  z << a, b;
  const double g = d(z);
  if (g > 1.0) {
    a /= g;
    b /= g;
  }
  return {a, b};
}

double ip_re(const CVector& a, const CVector& b) { return a.dot(b).real(); }

}  // namespace

DNorm DNorm::sum_form(HermMatrix d) {
  DNorm n;
  n.first = std::move(d);
  return n;
}

double DNorm::operator()(const CVector& v) const {
  if (v.size() != dim()) throw DomainError("D-norm: vector has wrong dimension");
  const Index n1 = first.dim();
  if (!coupled()) return dnorm(first, v);
  const CVector a = v.head(n1), b = v.tail(second.dim());
  double out = std::max(dnorm(first, a), dnorm(second, b));
  if (coupling == CouplingKind::Equality) {
    if ((a - b).norm() > 1e-12 * (1.0 + v.norm())) return std::numeric_limits<double>::infinity();
  } else {
    out = std::max(out, constant * (x * (a - b)).norm());
  }
  return out;
}

DNorm DNorm::swapped() const {
  DNorm d = *this;
  std::swap(d.first, d.second);
  return d;
}

double dual_norm_conic(const CVector& v, const DNorm& d, const conic::Options& opt) {
  if (v.size() != d.dim()) throw DomainError("dual norm: vector has wrong dimension");
  const Index n1 = d.first.dim(), n2 = d.second.dim();
  const Index nz = 2 * (n1 + n2);
  const Index n = nz + (d.coupled() ? 4 : 2);
  conic::Problem p;
  p.objective = RVector::Zero(n);
  const RMatrix V1 = select_cols(2 * n1, n, 0);
  add_sum_dnorm(p, d.first, V1, nz, nz + 1);
  p.objective.head(2 * n1) = realify(CVector(v.head(n1)));
  if (d.coupled()) {
    const RMatrix V2 = select_cols(2 * n2, n, 2 * n1);
    add_sum_dnorm(p, d.second, V2, nz + 2, nz + 3);
    add_coupling(p, d, V1, V2);
    p.objective.segment(2 * n1, 2 * n2) = realify(CVector(v.tail(n2)));
  }
  const auto res = conic::maximize(p, opt);
  CVector a = unrealify(RVector(res.x.head(2 * n1)));
  CVector b = d.coupled() ? unrealify(RVector(res.x.segment(2 * n1, 2 * n2))) : CVector(0);
  if (d.coupled()) {
    std::tie(a, b) = repair_pair(d, a, b);
  } else {
    const double g = dnorm(d.first, a);
    if (g > 1.0) a /= g;
  }
  CVector z(n1 + n2);
  z << a, b;
  return std::max(0.0, ip_re(z, v));
}

double dual_norm(const CVector& v, const DNorm& d, const conic::Options& opt) {
  if (!d.coupled()) return dual_dnorm(v, d.first).value;
  return dual_norm_conic(v, d, opt);
}

BundleReport check_bundle(const MetrizedBundle& b, int samples, std::uint64_t seed) {
  BundleReport rep;
  rep.samples = samples;
  rep.slack_a = rep.slack_c = rep.slack_d = std::numeric_limits<double>::infinity();
  const Index M = b.dnorm.dim();
  const Index k = static_cast<Index>(b.weights.size());
  bool ok = true;
  auto tol = [](double scale) { return 1e-9 * (1.0 + scale); };
  for (int i = 0; i < samples; ++i) {
    Rng rng(seed, static_cast<std::uint64_t>(i));
    CVector z = complex_gaussian(rng, M) * std::exp(rng.normal());
    CVector w = complex_gaussian(rng, M) * std::exp(rng.normal());
    if (b.dnorm.coupling == CouplingKind::Equality && b.dnorm.coupled()) {
      const Index h = M / 2;
      z.tail(h) = z.head(h);
      w.tail(h) = w.head(h);
    }
    const double Dz = b.dnorm(z), Dw = b.dnorm(w);

    double mod2 = 0.0;
    for (const auto& W : b.weights) mod2 = std::max(mod2, z.dot(W * z).real());
    const double sa = Dz - std::sqrt(std::max(mod2, 0.0));
    rep.slack_a = std::min(rep.slack_a, sa);
    ok = ok && sa >= -tol(Dz);

    RVector re(k), im(k);
    for (Index j = 0; j < k; ++j) {
      const cplx ip = z.dot(b.weights[j] * w);
      re(j) = ip.real();
      im(j) = ip.imag();
    }
    const double lc = std::max(b.base.evaluate(re), b.base.evaluate(im));
    const double sc = 2.0 * Dz * Dw - lc;
    rep.slack_c = std::min(rep.slack_c, sc);
    ok = ok && sc >= -tol(2.0 * Dz * Dw);

    const RVector c = project_equalities(b.acting, gaussian_vector(rng, b.acting.size()));
    const HermMatrix a = b.acting.element(c);
    const double bound = (op_norm(a) + b.leibniz_constant * b.acting.evaluate(c)) * Dz;
    const double sd = bound - b.dnorm(CVector(a.mat() * z));
    rep.slack_d = std::min(rep.slack_d, sd);
    ok = ok && sd >= -tol(bound);
  }
  rep.passed = ok;
  return rep;
}

MetrizedBundle mvb(const FiniteSpectralTriple& t, int samples, std::uint64_t seed) {
  const auto metric = check_metric(t);
  if (!metric.passed()) throw ValidationError("mvb: triple is not metric");
  MetrizedBundle b;
  b.dnorm = DNorm::sum_form(t.dirac());
  b.weights = {CMatrix::Identity(t.dim(), t.dim())};
  b.base.basis = {HermMatrix::identity(1)};
  b.acting = lip_seminorm(t);
  b.leibniz_constant = 1.0;
  const auto rep = check_bundle(b, samples, seed);
  if (!rep.passed) {
    std::ostringstream os;
    os << "mvb: bundle inequality violated (slacks a=" << rep.slack_a << " c=" << rep.slack_c
       << " d=" << rep.slack_d << ")";
    throw ValidationError(os.str());
  }
  return b;
}

double modular_mk(const MetrizedBundle& b, const RVector& phi, const CVector& omega, const RVector& psi,
                  const CVector& eta, const conic::Options& opt) {
  const Index k = static_cast<Index>(b.weights.size());
  if (phi.size() != k || psi.size() != k) throw DomainError("modular_mk: base state has wrong length");
  const double tol = 1e-9;
  if (b.dnorm(omega) > 1.0 + tol || b.dnorm(eta) > 1.0 + tol)
    throw DomainError("modular_mk: vectors must have D-norm at most 1");
  CVector v = CVector::Zero(b.dnorm.dim());
  for (Index i = 0; i < k; ++i) v += b.weights[i] * (phi(i) * omega - psi(i) * eta);
  return dual_norm(v, b.dnorm, opt);
}

ModularTunnel ModularTunnel::swapped() const {
  ModularTunnel t = *this;
  t.base = base.swapped();
  t.scalar = scalar.swapped();
  t.dnorm = dnorm.swapped();
  for (auto& q : t.lift_checks) q.side = other(q.side);
  return t;
}

MetrizedBundle ModularTunnel::bundle() const {
  MetrizedBundle b;
  b.dnorm = dnorm;
  const Index n1 = dnorm.first.dim(), n2 = dnorm.second.dim();
  const CMatrix x = dnorm.x.size() ? dnorm.x : CMatrix(CMatrix::Identity(n1, n2));
  b.weights = {direct_sum(x, CMatrix::Zero(n2, n2)), direct_sum(CMatrix::Zero(n1, n1), x)};
  RVector e1(2), e2(2);
  e1 << 1.0, 0.0;
  e2 << 0.0, 1.0;
  b.base.basis = {HermMatrix::diagonal(e1), HermMatrix::diagonal(e2)};
  SeminormTerm q;
  q.hermitian = true;
  q.equality = scalar.is_identity();
  const double c = q.equality ? 1.0 : scalar.coupling.constant;
  q.images = {CMatrix::Constant(1, 1, c), CMatrix::Constant(1, 1, -c)};
  b.base.terms.push_back(q);
  b.acting = base.oriented(Side::Left);
  b.leibniz_constant = leibniz_constant;
  return b;
}

DNorm oriented_dnorm(const ModularTunnel& tun, Side source) {
  return source == Side::Left ? tun.dnorm : tun.dnorm.swapped();
}

namespace {

// max s subject to D'(s omega, eta) <= 1; returns a feasible (s, eta).
std::pair<double, CVector> solve_lift(const DNorm& d, const CVector& omega, const conic::Options& opt) {
  const Index n1 = d.first.dim(), n2 = d.second.dim();
  const Index n = 1 + 2 * n2 + 4;
  conic::Problem p;
  RMatrix V1 = RMatrix::Zero(2 * n1, n);
  V1.col(0) = realify(omega);
  const RMatrix V2 = select_cols(2 * n2, n, 1);
  add_sum_dnorm(p, d.first, V1, n - 4, n - 3);
  add_sum_dnorm(p, d.second, V2, n - 2, n - 1);
  add_coupling(p, d, V1, V2);
  p.objective = RVector::Zero(n);
  p.objective(0) = 1.0;
  const auto res = conic::maximize(p, opt);
  double scale = res.x(0);
  CVector eta = unrealify(RVector(res.x.segment(1, 2 * n2)));
  CVector z(n1 + n2);
  z << scale * omega, eta;
  const double g = d(z);
  if (g > 1.0) {
    scale /= g;
    eta /= g;
  }
  return {scale, eta};
}

}  // namespace

double lift_quotient(const ModularTunnel& tun, Side side, const CVector& omega, const conic::Options& opt) {
  const DNorm d = oriented_dnorm(tun, side);
  if (omega.size() != d.first.dim()) throw DomainError("lift: vector has wrong dimension");
  if (omega.norm() == 0.0) return 0.0;
  if (d.coupling == CouplingKind::Equality) return std::max(dnorm(d.first, omega), dnorm(d.second, omega));
  const double scale = solve_lift(d, omega, opt).first;
  return scale > 0.0 ? 1.0 / scale : std::numeric_limits<double>::infinity();
}

CVector minimal_lift(const ModularTunnel& tun, Side side, const CVector& omega, const conic::Options& opt) {
  const DNorm d = oriented_dnorm(tun, side);
  if (omega.size() != d.first.dim()) throw DomainError("lift: vector has wrong dimension");
  if (d.coupling == CouplingKind::Equality) return omega;
  const auto [scale, eta] = solve_lift(d, omega, opt);
  if (!(scale > 0.0)) return CVector::Zero(d.second.dim());
  return eta / scale;
}

CVector sample_unit_vector(const HermMatrix& dirac, std::uint64_t seed, std::uint64_t stream) {
  Rng rng(seed, stream);
  const CVector v = complex_gaussian(rng, dirac.dim());
  return v / dnorm(dirac, v);
}

ReachPoint reach_point(const ModularTunnel& tun, Side source, const CVector& omega, const conic::Options& opt) {
  const DNorm d = oriented_dnorm(tun, source);
  const Index ns = d.first.dim(), nt = d.second.dim();
  if (omega.size() != ns) throw DomainError("reach: vector has wrong dimension");
  // [z_s | z_t | q | tau | s1 t1 s2 t2]
  const Index iq = 2 * ns + 2 * nt, itau = iq + 2 * nt, n = itau + 5;
  const RMatrix Vs = select_cols(2 * ns, n, 0);
  const RMatrix Vt = select_cols(2 * nt, n, 2 * ns);
  const RMatrix Vq = select_cols(2 * nt, n, iq);
  conic::Problem p;
  add_sum_dnorm(p, d.first, Vs, itau + 1, itau + 2);
  add_sum_dnorm(p, d.second, Vt, itau + 3, itau + 4);
  add_coupling(p, d, Vs, Vt);
  // tau >= dual norm of z_t, through its min-max form
  p.blocks.push_back(conic::vector_block(conic::SetKind::SecondOrderCone,
                                         stack(unit_row(n, itau), Vt - realify_linear(d.second.mat()) * Vq)));
  p.blocks.push_back(conic::vector_block(conic::SetKind::SecondOrderCone, stack(unit_row(n, itau), Vq)));
  p.objective = RVector::Zero(n);
  p.objective.head(2 * ns) = realify(omega);
  p.objective(itau) = -1.0;

  const auto res = conic::maximize(p, opt);
  auto [zs, zt] = repair_pair(d, unrealify(RVector(res.x.head(2 * ns))),
                              unrealify(RVector(res.x.segment(2 * ns, 2 * nt))));
  ReachPoint out;
  out.value = std::max(0.0, ip_re(zs, omega) - dual_dnorm(zt, d.second).value);
  out.zeta.resize(ns + nt);
  out.zeta << zs, zt;
  out.converged = res.diag.converged;
  return out;
}

ReachEstimate modular_reach(const ModularTunnel& tun, const ReachOptions& opt) {
  ReachEstimate est;
  for (Side src : {Side::Left, Side::Right}) {
    const HermMatrix& D = tun.dirac(src);
    const Index ns = D.dim();
    std::vector<std::vector<ReachSample>> rows(static_cast<std::size_t>(opt.samples));
    auto work = [&](int i) {
      CVector omega = sample_unit_vector(D, opt.seed, static_cast<std::uint64_t>(i));
      for (int round = 0; round <= opt.rounds; ++round) {
        const auto pt = reach_point(tun, src, omega, opt.solver);
        rows[i].push_back({src, i, round, pt.value, pt.converged});
        // best omega against the current witness
        const auto dual = dual_dnorm(CVector(pt.zeta.head(ns)), D);
        if (dual.value <= 0.0) break;
        omega = dual.maximizer;
      }
    };
    if (opt.exec == Exec::Parallel) {
#pragma omp parallel for schedule(dynamic)
      for (int i = 0; i < opt.samples; ++i) work(i);
    } else {
      for (int i = 0; i < opt.samples; ++i) work(i);
    }
    double best = 0.0;
    for (const auto& r : rows)
      for (const auto& s : r) {
        best = std::max(best, s.value);
        est.samples.push_back(s);
        if (!s.converged) ++est.unconverged;
      }
    est.direction[static_cast<int>(src)] = best;
  }
  est.value = std::max(est.direction[0], est.direction[1]);
  return est;
}

namespace {

void check_lifts(ModularTunnel& tun, const ModularOptions& opt) {
  tun.lift_checks.clear();
  double worst = 0.0;
  for (Side s : {Side::Left, Side::Right}) {
    const HermMatrix& D = tun.dirac(s);
    for (int i = 0; i < opt.lift_samples; ++i) {
      const CVector omega = sample_unit_vector(D, opt.tunnel.seed + 17, static_cast<std::uint64_t>(i) + (s == Side::Right ? 500009ULL : 0ULL));
      const double q = lift_quotient(tun, s, omega, opt.tunnel.solver);
      const double rel = std::abs(q - 1.0);
      tun.lift_checks.push_back({s, 1.0, q, rel});
      worst = std::max(worst, rel);
    }
  }
  if (worst > opt.tunnel.quotient_tol) {
    std::ostringstream os;
    os << "modular tunnel (" << tun.recipe << "): D-norm quotient property fails, relative error " << worst;
    throw ValidationError(os.str());
  }
}

void check_tunnel_bundle(ModularTunnel& tun, const ModularOptions& opt) {
  tun.bundle_report = check_bundle(tun.bundle(), opt.bundle_samples, opt.tunnel.seed + 3);
  tun.inner_product_slack = tun.bundle_report.slack_c;
  if (!tun.bundle_report.passed) {
    std::ostringstream os;
    os << "modular tunnel (" << tun.recipe << "): bundle inequality violated (slacks a="
       << tun.bundle_report.slack_a << " c=" << tun.bundle_report.slack_c << " d=" << tun.bundle_report.slack_d
       << ")";
    throw ValidationError(os.str());
  }
}

Tunnel scalar_identity() {
  SeminormSpec point;
  point.basis.push_back(HermMatrix::identity(1));
  Tunnel t;
  t.left = t.right = point;
  t.coupling.kind = CouplingKind::Equality;
  t.analytic_bound = 0.0;
  t.recipe = "identity";
  return t;
}

}  // namespace

ModularTunnel modular_tunnel_identity(const FiniteSpectralTriple& t) {
  ModularTunnel tun;
  tun.base = identity_tunnel(t);
  tun.scalar = scalar_identity();
  tun.dnorm.first = tun.dnorm.second = t.dirac();
  tun.dnorm.coupling = CouplingKind::Equality;
  tun.dnorm.x = CMatrix::Identity(t.dim(), t.dim());
  tun.recipe = "identity";
  return tun;
}

ModularTunnel modular_tunnel_perturbation(const FiniteSpectralTriple& t, const HermMatrix& T,
                                          const ModularOptions& opt) {
  PerturbationOptions po = opt.perturbation;
  po.tunnel = opt.tunnel;
  Tunnel base = perturbation_tunnel(t, T, po);
  if (base.is_identity()) return modular_tunnel_identity(t);
  const double tn = op_norm(T);
  const double b = *base.analytic_bound;
  const double x = b / (1.0 + b);  // 2 r ||T||

  ModularTunnel tun;
  tun.base = std::move(base);
  tun.scalar = scalar_tunnel((1.0 + tn) / tn);
  tun.dnorm.first = t.dirac();
  tun.dnorm.second = t.dirac() + T;
  tun.dnorm.coupling = CouplingKind::Difference;
  tun.dnorm.constant = 1.0 + 1.0 / tn;
  tun.dnorm.x = CMatrix::Identity(t.dim(), t.dim());
  tun.leibniz_constant = (1.0 + tn) / (1.0 - x);
  tun.recipe = "perturbation";

  // explicit lifts eta = xi / (1 + ||T||) on both sides
  for (Side s : {Side::Left, Side::Right}) {
    const DNorm d = oriented_dnorm(tun, s);
    for (int i = 0; i < opt.lift_samples; ++i) {
      const CVector xi = sample_unit_vector(d.first, opt.tunnel.seed + 29, static_cast<std::uint64_t>(i));
      CVector z(2 * xi.size());
      z << xi, xi / (1.0 + tn);
      if (d(z) > 1.0 + 1e-12) throw ValidationError("modular perturbation tunnel: explicit lift has D' > 1");
    }
  }
  check_lifts(tun, opt);
  check_tunnel_bundle(tun, opt);
  return tun;
}

ModularTunnel modular_tunnel_bridge(const FiniteSpectralTriple& t1, const FiniteSpectralTriple& t2,
                                    const CMatrix& x, double eps, const ModularOptions& opt) {
  ModularTunnel tun;
  tun.base = bridge_tunnel(t1, t2, x, eps, opt.tunnel);
  tun.scalar = scalar_tunnel(1.0 / (2.0 * eps));
  tun.dnorm.first = t1.dirac();
  tun.dnorm.second = t2.dirac();
  tun.dnorm.coupling = CouplingKind::Difference;
  tun.dnorm.constant = 1.0 / (2.0 * eps);
  tun.dnorm.x = x;
  tun.leibniz_constant = 1.0;
  tun.recipe = "bridge";
  check_lifts(tun, opt);
  check_tunnel_bundle(tun, opt);
  return tun;
}

}  // namespace qmg
