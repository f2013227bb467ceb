#include <doctest.h>

#include "qmg/algebra.hpp"
#include "qmg/errors.hpp"
#include "qmg/random.hpp"

using namespace qmg;

TEST_CASE("closure of generators") {
  CMatrix p = CMatrix::Zero(2, 2);
  p(0, 0) = 1.0;
  CHECK(close_algebra({p}, 2).dim() == 2);
  CHECK(close_algebra({pauli(1), pauli(3)}, 2).dim() == 4);
  CHECK(close_algebra({}, 3).dim() == 1);
  // C I_2 (+) C inside M_3
  CMatrix q = CMatrix::Zero(3, 3);
  q(2, 2) = 1.0;
  CHECK(close_algebra({q}, 3).dim() == 2);
}

TEST_CASE("non-closed basis is rejected") {
  CMatrix e12 = CMatrix::Zero(2, 2);
  e12(0, 1) = 1.0;
  CHECK_THROWS_AS(FiniteAlgebra::from_basis(2, {CMatrix::Identity(2, 2), e12}), ValidationError);
  CHECK_THROWS_AS(FiniteAlgebra::from_basis(2, {e12, e12}), DomainError);
  CHECK_THROWS_AS(FiniteAlgebra::from_basis(3, {CMatrix::Identity(2, 2)}), DomainError);
}

TEST_CASE("projection residual and self-adjoint basis") {
  for (Index n : {2, 3, 4}) {
    const auto alg = FiniteAlgebra::full_matrix(n);
    const auto diag = FiniteAlgebra::diagonal(n);
    Rng rng(n);
    for (int s = 0; s < 5; ++s) {
      const CMatrix a = CMatrix::Random(n, n);
      CHECK(alg.residual(a) < 1e-10);
      CHECK(diag.residual(diag.project(a)) < 1e-12);
    }
    const auto& sa = alg.sa_basis();
    REQUIRE(static_cast<Index>(sa.size()) == n * n);
    CHECK((sa[0].mat() - CMatrix::Identity(n, n) / std::sqrt(double(n))).norm() < 1e-12);
    for (std::size_t i = 0; i < sa.size(); ++i)
      for (std::size_t j = 0; j < sa.size(); ++j) {
        const double ip = (sa[i].mat() * sa[j].mat()).trace().real();
        CHECK(ip == doctest::Approx(i == j ? 1.0 : 0.0).epsilon(1e-10));
      }
    const HermMatrix h = random_hermitian(rng, n);
    CHECK((alg.from_sa(alg.sa_coefficients(h)).mat() - h.mat()).norm() < 1e-10);
  }
}

TEST_CASE("states") {
  CHECK(maximally_mixed(3).eval(HermMatrix::identity(3)) == doctest::Approx(1.0));
  CHECK(random_state(4, 9).density().mat().trace().real() == doctest::Approx(1.0));
  CHECK_THROWS_AS(AlgState::from_density(CMatrix::Identity(2, 2)), DomainError);
  RVector d(2);
  d << 1.5, -0.5;
  CHECK_THROWS_AS(AlgState::from_density(HermMatrix::diagonal(d).mat()), DomainError);
  const auto s = mix_direct_sum(basis_state(2, 0), basis_state(1, 0), 0.25);
  CHECK(s.dim() == 3);
  CHECK(s.density().mat()(2, 2).real() == doctest::Approx(0.75));
}
