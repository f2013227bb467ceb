#include <doctest.h>

#include <cmath>

#include "fixtures.hpp"
#include "qmg/covariant.hpp"
#include "qmg/errors.hpp"
#include "qmg/random.hpp"

using namespace qmg;

namespace {

CovariantReachOptions few() {
  CovariantReachOptions o;
  o.samples = 4;
  return o;
}

}  // namespace

TEST_CASE("monoid grids: left invariance and unit") {
  for (const auto& g : {ProperMonoidGrid::reals(0.1, 3.0), ProperMonoidGrid::cyclic(7, 0.5), ProperMonoidGrid::trivial()}) {
    const auto b = g.ball(2.0);
    REQUIRE(!b.empty());
    for (MonoidElem x : b) {
      CHECK(g.op(g.identity(), x) == g.op(x, g.identity()));
      for (MonoidElem y : b)
        for (MonoidElem z : b) CHECK(std::abs(g.distance(g.op(z, x), g.op(z, y)) - g.distance(x, y)) <= 1e-12);
    }
  }
  const auto r = ProperMonoidGrid::reals(0.1, 1.0);
  CHECK(r.ball(0.35).size() == 7);
  CHECK(r.ball(5.0).size() == 21);
  CHECK(r.truncated(5.0));
  CHECK(ProperMonoidGrid::cyclic(6).ball(1.0).size() == 3);
}

TEST_CASE("almost isometries: identity, translation, trivial") {
  const auto r = ProperMonoidGrid::reals(0.1, 20.0);
  CHECK(verify_almost_isometry(identity_pair(r, 3.0, 0.0), r, r).passed);

  const MonoidElem c = 3;  // shift by 0.3
  AlmostIsometryPair shift = tabulate_pair([&](MonoidElem x) { return x + c; }, [&](MonoidElem x) { return x - c; },
                                           r, r, 2.0, 0.0);
  const auto rep = verify_almost_isometry(shift, r, r);
  CHECK_FALSE(rep.passed);
  CHECK(rep.worst > 0.0);
  shift.eps = rep.worst;
  CHECK(verify_almost_isometry(shift, r, r).passed);
  shift.eps = rep.worst - 1e-3;
  CHECK_FALSE(verify_almost_isometry(shift, r, r).passed);

  const auto t = ProperMonoidGrid::trivial();
  CHECK(verify_almost_isometry(identity_pair(t, 10.0, 0.0), t, t).passed);

  AlmostIsometryPair partial = identity_pair(r, 1.0, 0.1);
  partial.radius = 2.0;
  CHECK_THROWS_AS(verify_almost_isometry(partial, r, r), DomainError);
}

TEST_CASE("verification is thread independent") {
  const auto r = ProperMonoidGrid::reals(0.1, 20.0);
  const auto p = random_perturbed_identity(r, 0.5, 3);
  const auto a = verify_almost_isometry(p, r, r, Exec::Serial);
  const auto b = verify_almost_isometry(p, r, r, Exec::Parallel);
  CHECK(a.worst == b.worst);
  CHECK(a.checked == b.checked);
  CHECK(a.passed);
}

TEST_CASE("composition of almost isometries") {
  const auto r = ProperMonoidGrid::reals(0.1, 50.0);
  const auto id = identity_pair(r, 1.0 / 0.2, 0.2);
  const auto comp = compose_almost_isometries(id, identity_pair(r, 1.0 / 0.3, 0.3), r, r);
  CHECK(comp.eps == doctest::Approx(0.5));
  for (const auto& [k, v] : comp.forward.table) CHECK(k == v);

  for (std::uint64_t i = 0; i < 20; ++i) {
    Rng rng(i);
    const double e1 = rng.uniform(0.3, 0.65), e2 = rng.uniform(0.3, 0.65);
    const auto p = random_perturbed_identity(r, e1, 2 * i), q = random_perturbed_identity(r, e2, 2 * i + 1);
    CHECK(verify_almost_isometry(p, r, r).passed);
    const auto pq = compose_almost_isometries(p, q, r, r);
    CHECK(verify_almost_isometry(pq, r, r).passed);
  }
  CHECK_THROWS_AS(compose_almost_isometries(identity_pair(r, 1.25, 0.8), id, r, r), DomainError);
}

TEST_CASE("covariant distance between monoids") {
  const auto r = ProperMonoidGrid::reals(0.1, 50.0);
  std::vector<double> grid;
  for (int k = 1; k <= 70; ++k) grid.push_back(0.01 * k);
  const auto same = upsilon_upper_bound(r, r, {identity_pair(r, 100.0, 0.0)}, grid);
  CHECK(same.value <= 0.01 + 1e-12);
  CHECK_FALSE(same.capped);

  const auto t = ProperMonoidGrid::trivial();
  CHECK(upsilon_upper_bound(t, t, {identity_pair(t, 1.0, 0.0)}, grid).value <= 0.01 + 1e-12);

  const auto small = ProperMonoidGrid::cyclic(3, 0.05);
  const auto wrap = tabulate_pair([](MonoidElem x) { return ((x % 3) + 3) % 3; }, [](MonoidElem x) { return x; }, r, small,
                                  100.0, 0.0);
  const auto far = upsilon_upper_bound(r, small, {wrap}, grid);
  CHECK(far.capped);
  CHECK(far.value == doctest::Approx(std::sqrt(2.0) / 2));

  const auto none = upsilon_upper_bound(r, r, {}, grid);
  CHECK(none.no_candidates);
  CHECK(none.capped);
}

TEST_CASE("Kato bound on unitary groups") {
  for (const auto& t : {fx::two_point(1.0), fx::path({1.0, 0.7, 1.3})}) {
    Rng rng(t.dim());
    HermMatrix T = random_hermitian(rng, t.dim());
    T = T * (0.1 / op_norm(T));
    const auto rep = kato_check(t.dirac(), T, uniform_times(5.0, 100), 100);
    CHECK(rep.passed);
    CHECK(rep.worst_slack >= -1e-9);
    CHECK(rep.pairs == 100 * 100);
  }
}

TEST_CASE("covariant reach: collapse, identity, monotonicity") {
  const auto tp = fx::two_point(1.0);
  const ModularTunnel tun = modular_tunnel_perturbation(tp, HermMatrix(CMatrix(pauli(3) * 0.02)));
  ReachOptions ro;
  ro.samples = few().samples;
  ro.seed = few().seed;
  const double flat = modular_reach(tun, ro).value;
  const auto zero = covariant_reach(tun, {0.0}, few());
  CHECK(zero.exact_inner);
  CHECK(zero.value == doctest::Approx(flat).epsilon(1e-9));

  const double coarse = covariant_reach(tun, uniform_times(4.0, 5), few()).value;
  const double fine = covariant_reach(tun, uniform_times(4.0, 9), few()).value;  // superset grid
  CHECK(coarse >= zero.value - 1e-9);
  CHECK(fine >= coarse - 1e-9);

  CovariantReachOptions ser = few();
  ser.exec = Exec::Serial;
  CHECK(covariant_reach(tun, uniform_times(4.0, 5), ser).value == coarse);

  CHECK(covariant_reach(modular_tunnel_identity(tp), uniform_times(5.0, 11), few()).value ==
        doctest::Approx(0.0).epsilon(1e-6));
}

TEST_CASE("small perturbations have reach below eps") {
  // |T| <= eps^2/2 with both extent terms below eps/2
  const double eps = 0.4, tn = eps * eps / 2;
  const auto tp = fx::two_point(1.0);
  REQUIRE(tn / (1 + tn) < eps / 2);
  REQUIRE(perturbation_bound(1.0, tn) < eps / 2);
  const ModularTunnel tun = modular_tunnel_perturbation(tp, HermMatrix(CMatrix(pauli(3) * tn)));
  CHECK(covariant_reach(tun, uniform_times(1.0 / eps, 11), few()).value <= eps);
}

TEST_CASE("spectral propinquity upper bounds") {
  PropinquityOptions po;
  po.magnitude.reach.samples = 4;
  po.magnitude.extent.outer = 8;
  po.magnitude.extent.restarts = 1;
  po.magnitude.extent.rounds = 1;
  po.magnitude.time_step = 1.0;
  for (int k = 1; k <= 14; ++k) po.eps_grid.push_back(0.05 * k);

  const auto a = fx::two_point(1.0);
  const auto self = spectral_propinquity_upper_bound(a, a, po);
  CHECK(self.recipe == TunnelRecipe::Identity);
  CHECK(self.value <= 0.05 + 1e-12);

  // a bound below half the diameter gap would mean a broken tunnel
  const auto b = fx::two_point(1.1);
  const auto ab = spectral_propinquity_upper_bound(a, b, po);
  CHECK_FALSE(ab.capped);
  CHECK(ab.value >= (diameter(b).value - diameter(a).value) / 2);

  double prev = 1.0;
  for (double s : {0.1, 0.03, 0.01}) {
    const FiniteSpectralTriple moved(a.algebra(), a.dirac() + HermMatrix(CMatrix(pauli(3) * s)));
    const double v = spectral_propinquity_upper_bound(a, moved, po).value;
    CHECK(v <= prev + 1e-12);
    prev = v;
  }
}
