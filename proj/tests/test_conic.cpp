#include <doctest.h>

#include "qmg/conic.hpp"
#include "qmg/errors.hpp"
#include "qmg/random.hpp"

using namespace qmg;
using namespace qmg::conic;

TEST_CASE("euclidean ball support") {
  RVector f(3);
  f << 1.0, -2.0, 2.0;
  Problem p{f, {vector_block(SetKind::EuclideanBall, RMatrix::Identity(3, 3))}};
  const auto r = maximize(p);
  CHECK(r.value == doctest::Approx(3.0).epsilon(1e-7));
  REQUIRE(r.diag.upper_bound.has_value());
  CHECK(*r.diag.upper_bound - r.value < 1e-7);
}

TEST_CASE("spectral ball support is the nuclear norm") {
  for (int s = 0; s < 5; ++s) {
    Rng rng(40 + s);
    CMatrix y(3, 2);
    for (Index k = 0; k < y.size(); ++k) y.data()[k] = rng.cnormal();
    Problem p{realify(y), {matrix_block(SetKind::SpectralBall, 3, 2, RMatrix::Identity(12, 12))}};
    const auto r = maximize(p);
    CHECK(r.value == doctest::Approx(nuclear_norm(y)).epsilon(1e-6));
    CHECK(op_norm(unrealify(r.x, 3, 2)) <= 1.0 + 1e-12);
  }
}

TEST_CASE("PSD epigraph gives the top eigenvalue") {
  Rng rng(8);
  const HermMatrix h = random_hermitian(rng, 3);
  // variable s; block s I - H >= 0; maximize -s
  const RVector id = realify(CMatrix(CMatrix::Identity(3, 3)));
  Problem p;
  p.objective = RVector::Constant(1, -1.0);
  p.blocks.push_back(matrix_block(SetKind::PsdCone, 3, 3, RMatrix(id), RVector(-realify(h.mat()))));
  const auto r = maximize(p);
  CHECK(-r.value == doctest::Approx(lambda_max(h)).epsilon(1e-6));
}

TEST_CASE("cone blocks: simplex LP") {
  // maximize x + 2y subject to x, y >= 0 and 1 - x - y >= 0
  RVector f(2);
  f << 1.0, 2.0;
  RMatrix neg(1, 2);
  neg << -1.0, -1.0;
  Problem p{f,
            {vector_block(SetKind::Nonnegative, RMatrix::Identity(2, 2)),
             vector_block(SetKind::Nonnegative, neg, RVector::Ones(1))}};
  CHECK(maximize(p).value == doctest::Approx(2.0).epsilon(1e-6));
}

TEST_CASE("objective on the kernel is reported unbounded") {
  RVector f(2);
  f << 1.0, 1.0;
  RMatrix a = RMatrix::Zero(1, 2);
  a(0, 0) = 1.0;
  Problem p{f, {vector_block(SetKind::EuclideanBall, a)}};
  CHECK_THROWS_AS(maximize(p), UnboundedError);
  // a zero objective component along the kernel is fine
  f(1) = 0.0;
  CHECK(maximize(Problem{f, p.blocks}).value == doctest::Approx(1.0).epsilon(1e-7));
}

TEST_CASE("projections land in the set and are idempotent") {
  Rng rng(2);
  const std::vector<Block> blocks = {
      matrix_block(SetKind::SpectralBall, 2, 3, RMatrix::Identity(12, 12)),
      matrix_block(SetKind::HermitianSpectralBall, 3, 3, RMatrix::Identity(18, 18)),
      matrix_block(SetKind::PsdCone, 3, 3, RMatrix::Identity(18, 18)),
      vector_block(SetKind::SecondOrderCone, RMatrix::Identity(5, 5)),
      vector_block(SetKind::EuclideanBall, RMatrix::Identity(5, 5)),
      vector_block(SetKind::Nonnegative, RMatrix::Identity(5, 5)),
  };
  for (const auto& b : blocks)
    for (int s = 0; s < 10; ++s) {
      const RVector v = 2.0 * gaussian_vector(rng, b.size());
      const RVector p = project(b, v);
      CHECK((project(b, p) - p).norm() < 1e-9);
      const RVector w = 2.0 * gaussian_vector(rng, b.size());
      CHECK((project(b, v) - project(b, w)).norm() <= (v - w).norm() + 1e-12);
    }
}
