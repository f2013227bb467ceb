#include <doctest.h>

#include "fixtures.hpp"
#include "qmg/errors.hpp"
#include "qmg/kantorovich.hpp"
#include "qmg/oracle.hpp"
#include "qmg/random.hpp"

using namespace qmg;

TEST_CASE("two-point distance equals the edge length") {
  for (double d : {0.5, 1.0, 2.0}) {
    const auto t = fx::two_point(d);
    const auto r = mk_distance(t, basis_state(2, 0), basis_state(2, 1));
    CHECK(r.value == doctest::Approx(d).epsilon(1e-7));
    CHECK(r.upper_bound - r.value < 1e-6);
    CHECK(r.upper_bound >= r.value - 1e-12);
  }
}

TEST_CASE("distance axioms on random states") {
  const auto t = fx::path({1.0, 0.7, 1.3});
  const auto spec = lip_seminorm(t);
  for (int s = 0; s < 6; ++s) {
    const auto a = random_state(4, 10 + s), b = random_state(4, 20 + s), c = random_state(4, 30 + s);
    const double ab = mk_distance(spec, a, b).value;
    const double ba = mk_distance(spec, b, a).value;
    const double bc = mk_distance(spec, b, c).value;
    const double ac = mk_distance(spec, a, c).value;
    CHECK(ab == doctest::Approx(ba).epsilon(1e-6));
    CHECK(ac <= ab + bc + 1e-6);
    CHECK(mk_distance(spec, a, a).value == doctest::Approx(0.0));
  }
}

TEST_CASE("witness is feasible and attains the value") {
  const auto t = fx::path({0.5, 2.0});
  const auto spec = lip_seminorm(t);
  const auto phi = random_state(3, 1), psi = random_state(3, 2);
  const auto r = mk_distance(spec, phi, psi);
  const HermMatrix a = spec.element(r.witness);
  CHECK(lip(t, a) <= 1.0 + 1e-9);
  CHECK(phi.eval(a) - psi.eval(a) == doctest::Approx(r.value).epsilon(1e-10));
}

TEST_CASE("dimension mismatch is a domain error") {
  CHECK_THROWS_AS(mk_distance(fx::two_point(1.0), basis_state(3, 0), basis_state(2, 1)), DomainError);
}

TEST_CASE("dual D-norm: closed form cases") {
  RVector d(1);
  d << 3.0;
  CVector e(1);
  e << 1.0;
  CHECK(dual_dnorm(e, HermMatrix::diagonal(d)).value == doctest::Approx(0.25).epsilon(1e-12));
  Rng rng(1);
  const CVector v = complex_gaussian(rng, 4);
  CHECK(dual_dnorm(v, HermMatrix::zero(4)).value == doctest::Approx(v.norm()));
  CHECK(dual_dnorm(CVector::Zero(4), HermMatrix::zero(4)).value == 0.0);
}

TEST_CASE("dual D-norm dominates every unit vector and is attained") {
  for (int s = 0; s < 10; ++s) {
    Rng rng(60 + s);
    const Index n = 2 + s % 4;
    const HermMatrix D = random_hermitian(rng, n);
    const CVector v = complex_gaussian(rng, n);
    const auto r = dual_dnorm(v, D);
    CHECK(dnorm(D, r.maximizer) == doctest::Approx(1.0));
    CHECK(v.dot(r.maximizer).real() == doctest::Approx(r.value).epsilon(1e-9));
    for (int k = 0; k < 200; ++k) {
      CVector x = complex_gaussian(rng, n);
      x /= dnorm(D, x);
      CHECK(v.dot(x).real() <= r.value + 1e-12);
    }
  }
}

TEST_CASE("quotient with nothing free is the seminorm itself") {
  const auto t = fx::path({1.0, 0.5});
  const auto spec = lip_seminorm(t);
  Rng rng(4);
  for (int s = 0; s < 4; ++s) {
    const RVector c = gaussian_vector(rng, spec.size());
    const auto q = quotient_seminorm(spec, c, {});
    CHECK(q.value == doctest::Approx(spec.evaluate(c)).epsilon(1e-6));
    CHECK(q.lower <= q.upper + 1e-12);
  }
  // the identity direction has seminorm zero
  RVector id = RVector::Zero(spec.size());
  id(0) = 1.0;
  CHECK(quotient_seminorm(spec, id, {}).value == doctest::Approx(0.0));
}

TEST_CASE("oracle stays below the solver bound along scalar directions") {
  // Two points: the seminorm vanishes on scalars, so an unprojected search can ride rounding error.
  for (double d : {0.5, 1.0, 2.0}) {
    const auto t = fx::two_point(d);
    const SeminormSpec spec = lip_seminorm(t);
    const AlgState a = random_state(2, 11), b = random_state(2, 12);
    const auto exact = mk_distance(t, a, b);
    oracle::Options o;
    o.samples = 2000;
    o.seed = 5;
    const auto e = oracle::mk_distance(spec, a, b, o);
    CHECK(e.value <= exact.upper_bound + 1e-9);
    CHECK(e.value == doctest::Approx(exact.value).epsilon(1e-6));
  }
}
