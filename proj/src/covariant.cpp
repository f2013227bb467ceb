#include "qmg/covariant.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "qmg/errors.hpp"
#include "qmg/random.hpp"

namespace qmg {
namespace {

const double kCap = std::sqrt(2.0) / 2.0;

long long floor_index(double r, double step) {
  return static_cast<long long>(std::floor(r / step + 1e-9));
}

}  // namespace

ProperMonoidGrid ProperMonoidGrid::reals(double step, double cap) {
  if (!(step > 0.0) || !(cap >= 0.0)) throw DomainError("reals grid: need step > 0 and cap >= 0");
  ProperMonoidGrid g;
  g.kind_ = Kind::Reals;
  g.step_ = step;
  g.cap_ = cap;
  return g;
}

ProperMonoidGrid ProperMonoidGrid::cyclic(int order, double unit) {
  if (order < 1 || !(unit > 0.0)) throw DomainError("cyclic grid: need order >= 1 and unit > 0");
  ProperMonoidGrid g;
  g.kind_ = Kind::Cyclic;
  g.order_ = order;
  g.step_ = unit;
  return g;
}

ProperMonoidGrid ProperMonoidGrid::trivial() { return {}; }

MonoidElem ProperMonoidGrid::op(MonoidElem a, MonoidElem b) const {
  switch (kind_) {
    case Kind::Reals: return a + b;
    case Kind::Cyclic: return ((a + b) % order_ + order_) % order_;
    case Kind::Trivial: return 0;
  }
  return 0;
}

double ProperMonoidGrid::distance(MonoidElem a, MonoidElem b) const {
  switch (kind_) {
    case Kind::Reals: return step_ * static_cast<double>(std::llabs(a - b));
    case Kind::Cyclic: {
      const long long d = ((a - b) % order_ + order_) % order_;
      return step_ * static_cast<double>(std::min(d, order_ - d));
    }
    case Kind::Trivial: return 0.0;
  }
  return 0.0;
}

double ProperMonoidGrid::value(MonoidElem a) const { return kind_ == Kind::Trivial ? 0.0 : step_ * a; }

std::vector<MonoidElem> ProperMonoidGrid::ball(double r) const {
  std::vector<MonoidElem> out;
  if (r < 0.0) return out;
  switch (kind_) {
    case Kind::Reals: {
      const long long k = floor_index(std::min(r, cap_), step_);
      for (long long i = -k; i <= k; ++i) out.push_back(i);
      break;
    }
    case Kind::Cyclic:
      for (int i = 0; i < order_; ++i)
        if (distance(i, 0) <= r + 1e-12) out.push_back(i);
      break;
    case Kind::Trivial: out.push_back(0); break;
  }
  return out;
}

std::string ProperMonoidGrid::describe() const {
  std::ostringstream os;
  switch (kind_) {
    case Kind::Reals: os << "reals(step=" << step_ << ", cap=" << cap_ << ")"; break;
    case Kind::Cyclic: os << "cyclic(order=" << order_ << ", unit=" << step_ << ")"; break;
    case Kind::Trivial: os << "trivial"; break;
  }
  return os.str();
}

std::optional<MonoidElem> MonoidMap::at(MonoidElem g) const {
  const auto it = table.find(g);
  if (it == table.end()) return std::nullopt;
  return it->second;
}

AlmostIsometryPair tabulate_pair(const std::function<MonoidElem(MonoidElem)>& forward,
                                 const std::function<MonoidElem(MonoidElem)>& backward,
                                 const ProperMonoidGrid& g1, const ProperMonoidGrid& g2, double radius, double eps) {
  AlmostIsometryPair p;
  p.radius = radius;
  p.eps = eps;
  for (MonoidElem g : g1.ball(radius)) p.forward.table[g] = forward(g);
  for (MonoidElem h : g2.ball(radius)) p.backward.table[h] = backward(h);
  return p;
}

AlmostIsometryPair identity_pair(const ProperMonoidGrid& g, double radius, double eps) {
  const auto id = [](MonoidElem x) { return x; };
  return tabulate_pair(id, id, g, g, radius, eps);
}

AlmostIsometryReport verify_almost_isometry(const AlmostIsometryPair& p, const ProperMonoidGrid& g1,
                                            const ProperMonoidGrid& g2, Exec exec) {
  AlmostIsometryReport rep;
  const ProperMonoidGrid* grids[2] = {&g1, &g2};
  const MonoidMap* maps[2] = {&p.forward, &p.backward};

  for (int j = 0; j < 2; ++j) {
    const ProperMonoidGrid& src = *grids[j];
    const ProperMonoidGrid& dst = *grids[1 - j];
    const MonoidMap& fwd = *maps[j];
    const MonoidMap& back = *maps[1 - j];
    const auto bs = src.ball(p.radius);
    const auto bd = dst.ball(p.radius);
    std::vector<MonoidElem> img(bs.size()), pre(bd.size());
    for (std::size_t i = 0; i < bs.size(); ++i) {
      const auto v = fwd.at(bs[i]);
      if (!v) throw DomainError("almost isometry: map undefined on the required ball");
      img[i] = *v;
    }
    for (std::size_t i = 0; i < bd.size(); ++i) {
      const auto v = back.at(bd[i]);
      if (!v) throw DomainError("almost isometry: map undefined on the required ball");
      pre[i] = *v;
    }
    const auto e = fwd.at(src.identity());
    const double unit = e ? dst.distance(*e, dst.identity()) : std::numeric_limits<double>::infinity();
    rep.unit_defect = std::max(rep.unit_defect, unit);

    const auto n = static_cast<long long>(bs.size());
    std::vector<double> worst(bs.size(), 0.0);
    std::vector<std::pair<std::size_t, std::size_t>> arg(bs.size(), {0, 0});
    auto row = [&](long long a) {
      for (std::size_t b = 0; b < bs.size(); ++b) {
        const MonoidElem prod_img = dst.op(img[a], img[b]);
        const MonoidElem prod = src.op(bs[a], bs[b]);
        for (std::size_t h = 0; h < bd.size(); ++h) {
          const double d = std::abs(dst.distance(prod_img, bd[h]) - src.distance(prod, pre[h]));
          if (d > worst[a]) {
            worst[a] = d;
            arg[a] = {b, h};
          }
        }
      }
    };
    if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(static)
      for (long long a = 0; a < n; ++a) row(a);
    } else {
      for (long long a = 0; a < n; ++a) row(a);
    }
    rep.checked += n * n * static_cast<long long>(bd.size());
    for (std::size_t a = 0; a < bs.size(); ++a) {
      if (worst[a] > rep.worst) {
        rep.worst = worst[a];
        rep.worst_direction = j;
        rep.worst_g = bs[a];
        rep.worst_g2 = bs[arg[a].first];
        rep.worst_h = bd[arg[a].second];
      }
    }
  }
  rep.worst = std::max(rep.worst, rep.unit_defect);
  rep.passed = rep.worst <= p.eps + 1e-12;
  return rep;
}

AlmostIsometryPair compose_almost_isometries(const AlmostIsometryPair& p, const AlmostIsometryPair& q,
                                             const ProperMonoidGrid& g1, const ProperMonoidGrid& g3) {
  for (double e : {p.eps, q.eps})
    if (!(e > 0.0 && e < kCap)) throw DomainError("compose: each eps must lie in (0, sqrt(2)/2)");
  AlmostIsometryPair out;
  out.eps = p.eps + q.eps;
  out.radius = 1.0 / out.eps;

  auto missing = [](const char* which) {
    return ContractViolation(std::string("compose: ") + which + " not tabulated where the composition needs it");
  };
  for (MonoidElem g : g1.ball(out.radius)) {
    const auto mid = p.forward.at(g);
    if (!mid) throw missing("first forward map");
    const auto v = q.forward.at(*mid);
    if (!v) throw missing("second forward map");
    out.forward.table[g] = *v;
  }
  for (MonoidElem h : g3.ball(out.radius)) {
    const auto mid = q.backward.at(h);
    if (!mid) throw missing("second backward map");
    const auto v = p.backward.at(*mid);
    if (!v) throw missing("first backward map");
    out.backward.table[h] = *v;
  }
  const auto rep = verify_almost_isometry(out, g1, g3);
  if (!rep.passed) {
    std::ostringstream os;
    os << "compose: composed pair fails at eps=" << out.eps << " (worst defect " << rep.worst << " at g="
       << rep.worst_g << ", g'=" << rep.worst_g2 << ", h=" << rep.worst_h << ")";
    throw ContractViolation(os.str());
  }
  return out;
}

AlmostIsometryPair random_perturbed_identity(const ProperMonoidGrid& g, double eps, std::uint64_t seed) {
  if (g.kind() != ProperMonoidGrid::Kind::Reals) throw DomainError("perturbed identity: needs a reals grid");
  if (!(eps > 0.0)) throw DomainError("perturbed identity: eps must be positive");
  // each defect term picks up at most three jitters
  const int jitter = static_cast<int>(std::floor(eps / (3.0 * g.step()) + 1e-9));
  Rng rng(seed);
  AlmostIsometryPair p;
  p.eps = eps;
  p.radius = 1.0 / eps;
  // tabulate one step beyond the ball so compositions find their intermediate points
  const double reach = p.radius + (jitter + 1) * g.step() + eps;
  for (MonoidElem x : g.ball(reach)) p.forward.table[x] = x == 0 ? 0 : x + rng.integer(-jitter, jitter);
  for (MonoidElem x : g.ball(reach)) p.backward.table[x] = x == 0 ? 0 : x + rng.integer(-jitter, jitter);
  return p;
}

UpsilonBound upsilon_upper_bound(const ProperMonoidGrid& g, const ProperMonoidGrid& h,
                                 const std::vector<AlmostIsometryPair>& candidates,
                                 const std::vector<double>& eps_grid) {
  UpsilonBound out;
  out.value = kCap;
  out.capped = true;
  if (candidates.empty()) {
    out.no_candidates = true;
    return out;
  }
  std::vector<double> grid = eps_grid;
  std::sort(grid.begin(), grid.end());
  for (std::size_t c = 0; c < candidates.size(); ++c) {
    for (double e : grid) {
      if (!(e > 0.0) || e >= out.value) break;
      AlmostIsometryPair p = candidates[c];
      p.eps = e;
      p.radius = 1.0 / e;
      bool ok = false;
      try {
        ok = verify_almost_isometry(p, g, h).passed;
      } catch (const DomainError&) {
        ok = false;  // not tabulated far enough out for this radius
      }
      if (ok) {
        out.value = e;
        out.capped = false;
        out.best_candidate = static_cast<int>(c);
        break;
      }
    }
  }
  return out;
}

KatoReport kato_check(const HermMatrix& dirac, const HermMatrix& perturbation, const std::vector<double>& times,
                      int vectors, std::uint64_t seed, Exec exec) {
  if (dirac.dim() != perturbation.dim()) throw DomainError("kato: dimension mismatch");
  const HermMatrix moved = dirac + perturbation;
  const auto e0 = herm_eig(dirac);
  const auto e1 = herm_eig(moved);
  const double tn = op_norm(perturbation);

  std::vector<CVector> xs;
  for (int i = 0; i < vectors; ++i)
    xs.push_back(sample_unit_vector(i % 2 == 0 ? dirac : moved, seed, static_cast<std::uint64_t>(i)));

  const auto nt = static_cast<long long>(times.size());
  std::vector<double> slack(times.size(), std::numeric_limits<double>::infinity());
  auto work = [&](long long k) {
    const double t = times[k];
    const CMatrix diff = unitary_exp(e0, t) - unitary_exp(e1, t);
    for (const auto& x : xs) slack[k] = std::min(slack[k], std::abs(t) * tn - (diff * x).norm());
  };
  if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(static)
    for (long long k = 0; k < nt; ++k) work(k);
  } else {
    for (long long k = 0; k < nt; ++k) work(k);
  }
  KatoReport rep;
  rep.worst_slack = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < times.size(); ++k)
    if (slack[k] < rep.worst_slack) {
      rep.worst_slack = slack[k];
      rep.worst_t = times[k];
    }
  rep.pairs = nt * vectors;
  rep.passed = rep.worst_slack >= -1e-9;
  return rep;
}

std::vector<double> uniform_times(double half_width, int points) {
  if (points < 1) throw DomainError("time grid: need at least one point");
  if (points == 1) return {0.0};
  std::vector<double> t(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i) t[i] = -half_width + 2.0 * half_width * i / (points - 1);
  return t;
}

CovariantReach covariant_reach(const ModularTunnel& tun, const std::vector<double>& times,
                               const CovariantReachOptions& opt) {
  if (times.empty()) throw DomainError("covariant reach: empty time grid");
  CovariantReach out;
  if (std::all_of(times.begin(), times.end(), [](double t) { return t == 0.0; })) {
    ReachOptions ro;
    ro.samples = opt.samples;
    ro.seed = opt.seed;
    ro.exec = opt.exec;
    ro.solver = opt.solver;
    const auto r = modular_reach(tun, ro);
    out.value = r.value;
    out.direction[0] = r.direction[0];
    out.direction[1] = r.direction[1];
    out.exact_inner = true;
    return out;
  }

  // adjoint flows U(t)^* = exp(-itD), shared read-only
  std::vector<CMatrix> flow[2];
  for (Side s : {Side::Left, Side::Right}) {
    const auto eig = herm_eig(tun.dirac(s));
    for (double t : times) flow[static_cast<int>(s)].push_back(unitary_exp(eig, -t));
  }

  for (Side src : {Side::Left, Side::Right}) {
    const Side dst = other(src);
    const DNorm d = oriented_dnorm(tun, src);
    const HermMatrix& Ds = tun.dirac(src);
    const HermMatrix& Dt = tun.dirac(dst);
    const auto& Us = flow[static_cast<int>(src)];
    const auto& Ut = flow[static_cast<int>(dst)];
    const Index ns = Ds.dim(), nt = Dt.dim();

    std::vector<double> best(static_cast<std::size_t>(opt.samples), 0.0), when(best.size(), 0.0);
    auto work = [&](int i) {
      const CVector omega = sample_unit_vector(Ds, opt.seed, static_cast<std::uint64_t>(i));
      std::vector<CVector> partners;
      if (ns == nt) partners.push_back(omega / std::max(1.0, dnorm(Dt, omega)));
      CVector lift = minimal_lift(tun, src, omega, opt.solver);
      partners.push_back(lift / std::max(1.0, dnorm(Dt, lift)));

      double inner = std::numeric_limits<double>::infinity(), inner_t = 0.0;
      for (const auto& eta : partners) {
        double worst = 0.0, worst_t = 0.0;
        for (std::size_t k = 0; k < times.size() && worst < inner; ++k) {
          CVector v(ns + nt);
          v << Us[k] * omega, -(Ut[k] * eta);
          const double val = dual_norm(v, d, opt.solver);
          if (val > worst) {
            worst = val;
            worst_t = times[k];
          }
        }
        if (worst < inner) {
          inner = worst;
          inner_t = worst_t;
        }
      }
      best[i] = inner;
      when[i] = inner_t;
    };
    if (opt.exec == Exec::Parallel) {
#pragma omp parallel for schedule(dynamic)
      for (int i = 0; i < opt.samples; ++i) work(i);
    } else {
      for (int i = 0; i < opt.samples; ++i) work(i);
    }
    const auto top = std::max_element(best.begin(), best.end());
    const double dir = top == best.end() ? 0.0 : *top;
    out.direction[static_cast<int>(src)] = dir;
    out.evaluations += static_cast<long long>(opt.samples) * static_cast<long long>(times.size());
    if (dir > out.value) {
      out.value = dir;
      out.worst_time = when[static_cast<std::size_t>(top - best.begin())];
    }
  }
  return out;
}

Magnitude magnitude(const ModularTunnel& tun, double eps, const MagnitudeOptions& opt,
                    std::optional<double> cached_extent) {
  if (!(eps > 0.0)) throw DomainError("magnitude: eps must be positive");
  Magnitude m;
  m.eps = eps;
  m.extent = cached_extent ? *cached_extent : extent_estimate(tun.base, opt.extent).value;
  m.scalar_extent = tun.is_identity() ? 0.0 : 1.0 / tun.scalar.coupling.constant;
  // time ball G[1/eps] on the grid of the line
  const auto line = ProperMonoidGrid::reals(opt.time_step, 1.0 / eps);
  std::vector<double> times;
  for (MonoidElem g : line.ball(1.0 / eps)) times.push_back(line.value(g));
  m.time_points = static_cast<int>(times.size());
  // the algebra-level reach under the trivial group is a sup over a subset of the extent's states,
  // so it never exceeds the extent term
  m.reach = covariant_reach(tun, times, opt.reach).value;
  m.value = std::max({m.extent, m.scalar_extent, m.reach});
  return m;
}

std::string to_string(TunnelRecipe r) {
  switch (r) {
    case TunnelRecipe::Auto: return "auto";
    case TunnelRecipe::Identity: return "identity";
    case TunnelRecipe::Perturbation: return "perturbation";
    case TunnelRecipe::Bridge: return "bridge";
  }
  return "?";
}

namespace {

bool same_algebra(const FiniteAlgebra& a, const FiniteAlgebra& b) {
  if (a.ambient_dim() != b.ambient_dim() || a.dim() != b.dim() || a.orthonormal_basis().size() != b.orthonormal_basis().size()) return false;
  return std::all_of(b.orthonormal_basis().begin(), b.orthonormal_basis().end(),
                     [&](const CMatrix& m) { return a.contains(m); });
}

}  // namespace

PropinquityBound spectral_propinquity_upper_bound(const FiniteSpectralTriple& t1, const FiniteSpectralTriple& t2,
                                                  const PropinquityOptions& opt) {
  PropinquityBound out;
  std::vector<double> grid = opt.eps_grid;
  if (grid.empty())
    for (int k = 1; k <= 70; ++k) grid.push_back(0.01 * k);
  std::sort(grid.begin(), grid.end());
  grid.erase(std::remove_if(grid.begin(), grid.end(), [](double e) { return !(e > 0.0) || e > kCap; }), grid.end());
  out.value = kCap;
  out.capped = true;

  const bool same = same_algebra(t1.algebra(), t2.algebra());
  TunnelRecipe recipe = opt.recipe;
  if (recipe == TunnelRecipe::Auto) {
    if (same && (t1.dirac().mat() - t2.dirac().mat()).norm() == 0.0)
      recipe = TunnelRecipe::Identity;
    else if (same)
      recipe = TunnelRecipe::Perturbation;
    else
      recipe = TunnelRecipe::Bridge;
  }
  out.recipe = recipe;

  ModularTunnel tun;
  try {
    switch (recipe) {
      case TunnelRecipe::Identity:
        if (!same || (t1.dirac().mat() - t2.dirac().mat()).norm() != 0.0)
          throw DomainError("identity recipe needs identical triples");
        tun = modular_tunnel_identity(t1);
        break;
      case TunnelRecipe::Perturbation:
        if (!same) throw DomainError("perturbation recipe needs a shared algebra");
        tun = modular_tunnel_perturbation(t1, t2.dirac() - t1.dirac(), opt.modular);
        break;
      case TunnelRecipe::Bridge: {
        const CMatrix x = opt.bridge_x.size() ? opt.bridge_x : CMatrix(CMatrix::Identity(t1.dim(), t2.dim()));
        tun = modular_tunnel_bridge(t1, t2, x, opt.bridge_eps, opt.modular);
        break;
      }
      case TunnelRecipe::Auto: break;
    }
  } catch (const std::exception& e) {
    out.messages.push_back(std::string("tunnel construction rejected: ") + e.what());
    return out;
  }
  if (grid.empty()) {
    out.messages.push_back("empty eps grid");
    return out;
  }

  if (tun.is_identity()) {
    // magnitude vanishes for every eps, so the infimum is 0
    out.value = 0.0;
    out.capped = false;
    out.messages.push_back("identity tunnel: magnitude 0 at every eps");
    return out;
  }
  const double ext = extent_estimate(tun.base, opt.magnitude.extent).value;
  // magnitude(eps) grows as eps shrinks, so "magnitude <= eps" is monotone along the grid
  auto passes = [&](std::size_t k) {
    const Magnitude m = magnitude(tun, grid[k], opt.magnitude, ext);
    out.evaluations.push_back(m);
    return m.value <= grid[k];
  };
  // the smallest eps carries the longest time grid, so start from the top and only go down as needed
  long long lo = -1, hi = static_cast<long long>(grid.size()) - 1;
  if (!passes(static_cast<std::size_t>(hi))) {
    out.messages.push_back("no grid point satisfies magnitude <= eps");
    return out;
  }
  while (hi - lo > 1) {
    const long long mid = lo + (hi - lo) / 2;
    (passes(static_cast<std::size_t>(mid)) ? hi : lo) = mid;
  }
  out.value = grid[hi];
  out.capped = false;
  return out;
}

}  // namespace qmg
