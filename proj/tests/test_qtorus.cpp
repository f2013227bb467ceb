#include <doctest.h>

#include <cmath>

#include "qmg/errors.hpp"
#include "qmg/qtorus.hpp"
#include "qmg/random.hpp"
#include "qmg/tunnel.hpp"

using namespace qmg;
using namespace qmg::torus;

namespace {

FuzzyTorusSpec twisted(int m, int k) { return with_theta(FuzzyTorusSpec::flat(2, m), double(k) / m); }

FuzzyTorusSpec perturbed(int m) {
  FuzzyTorusSpec s = FuzzyTorusSpec::flat(2, m);
  s.perturbation = {{{{1, 0}, {0.05, 0.0}}}, {{{0, 1}, {0.04, 0.0}}}, {{{1, 1}, {0.03, 0.01}}}};
  return s;
}

double max_abs(const CMatrix& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace

TEST_CASE("symmetric window representatives") {
  CHECK(representative(0, 3) == 0);
  CHECK(representative(1, 3) == 1);
  CHECK(representative(2, 3) == -1);
  CHECK(representative(3, 5) == -2);
  CHECK(representative(2, 4) == -2);
  CHECK(representative(-1, 5) == -1);
  for (int i = 0; i < 25; ++i) CHECK(lattice_index(lattice_point(i, 2, 5), 5) == i);
}

TEST_CASE("Weyl unitaries") {
  const auto flat = FuzzyTorusSpec::flat(2, 3);
  CHECK(max_abs(weyl(flat, {0, 0}) - CMatrix::Identity(9, 9)) == 0.0);
  const CMatrix shift = weyl(flat, {1, 0});
  for (Index r = 0; r < 9; ++r) {
    int ones = 0;
    for (Index c = 0; c < 9; ++c) {
      const cplx v = shift(r, c);
      CHECK((v == cplx(0.0) || v == cplx(1.0)));
      ones += v == cplx(1.0);
    }
    CHECK(ones == 1);
  }
  const auto tw = twisted(5, 2);
  for (const auto& z : all_frequencies(2, 5)) {
    const CMatrix w = weyl(tw, z);
    CHECK(max_abs(w * w.adjoint() - CMatrix::Identity(25, 25)) <= 1e-12);
  }
  CHECK_THROWS_AS(weyl(tw, {5, 0}), DomainError);
}

TEST_CASE("Weyl commutation phases are exact") {
  for (int m : {3, 5})
    for (int k = 0; k < m; ++k) {
      const auto spec = twisted(m, k);
      const auto freqs = all_frequencies(2, m);
      double worst = 0.0;
      for (const auto& z : freqs)
        for (const auto& w : freqs) {
          const CMatrix a = weyl(spec, z), b = weyl(spec, w);
          // exp(2 pi i ((Theta w).z - (Theta z).w)) with plain integer entries
          double p = 0.0;
          for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) p += spec.theta(i, j) * (w[j] * z[i] - z[j] * w[i]);
          const cplx phase = std::polar(1.0, 2 * kPi * p);
          worst = std::max(worst, std::abs(phase - commutation_phase(spec, z, w)));
          worst = std::max(worst, max_abs(a * b - phase * b * a));
        }
      CHECK(worst <= 1e-10);
    }
}

TEST_CASE("derivations: exact inside the window, wrap defect at the boundary") {
  const auto spec = twisted(5, 1);
  const Index n = spec.lattice_size();
  for (int j = 0; j < 2; ++j) CHECK(max_abs(commutator(derivation(spec, j).mat(), CMatrix::Identity(n, n))) == 0.0);

  const WindowCheck one = derivation_check(spec, 0, {1, 0});
  CHECK(one.interior_error <= 1e-10);
  const WindowCheck edge = derivation_check(spec, 0, {3, 0});
  CHECK(edge.wraps);
  CHECK(edge.wrap_defect > 0.5);
  CHECK(edge.interior_error <= 1e-10);
  for (int m : {3, 5})
    for (const auto& z : all_frequencies(2, m))
      for (int j = 0; j < 2; ++j) CHECK(derivation_check(twisted(m, 1), j, z).interior_error <= 1e-10);
  CHECK_FALSE(derivation_check(spec, 1, {4, 0}).wraps);
}

TEST_CASE("Clifford relations") {
  for (int d = 1; d <= 6; ++d) {
    const GammaSet g = gammas(d);
    CHECK(static_cast<int>(g.gammas.size()) == d);
    CHECK(g.residual <= 1e-12);
  }
  const GammaSet two = gammas(2);
  CHECK(max_abs(two.gammas[0] - pauli(1)) == 0.0);
  CHECK(max_abs(two.gammas[1] - pauli(2)) == 0.0);
  const GammaSet three = gammas(3);
  for (int k = 0; k < 3; ++k) CHECK(max_abs(three.gammas[k] - pauli(k + 1)) == 0.0);
  CHECK(gammas(1).size() == 2);
  CHECK(gammas(4).size() == 4);
}

TEST_CASE("fuzzy torus Dirac triples") {
  const auto flat = FuzzyTorusSpec::flat(2, 3);
  const FiniteSpectralTriple t = dirac(flat);
  CHECK(t.algebra().dim() == 9);
  CHECK(check_metric(t).passed());

  // triangle bound through [d_j, W_z] with unitary gammas
  for (const auto& z : all_frequencies(2, 3)) {
    const CMatrix w = represent(flat, {{z, 1.0}});
    double bound = 0.0;
    for (int j = 0; j < 2; ++j) bound += op_norm(commutator(derivation(flat, j).mat(), weyl(flat, z)));
    CHECK(lip_value(flat, w + w.adjoint()) <= 2 * bound + 1e-10);
  }

  const auto pert = perturbed(3);
  const CMatrix gap = dirac_operator(pert).mat() - free_dirac(pert).mat();
  CHECK(op_norm(gap) <= pert.perturbation_l1() + 1e-12);
  CHECK(check_metric(dirac(pert)).passed());
  CHECK(dirac(twisted(3, 1)).algebra().dim() == 9);

  CHECK_THROWS_AS(dirac(with_theta(flat, 0.1)), DomainError);
  FuzzyTorusSpec heavy = pert;
  heavy.perturbation[0][0].coeff = 0.3;
  CHECK_THROWS_AS(dirac(heavy), DomainError);
}

TEST_CASE("dual action and S_Theta") {
  const auto spec = twisted(3, 1);
  const Index n = spec.dim();
  CHECK(s_theta(spec, CMatrix::Identity(n, n)) == 0.0);

  RVector g(2);
  g << 1.0 / 3, 2.0 / 3;
  const CMatrix a = represent(spec, {{{1, 0}, 1.0}}), b = represent(spec, {{{1, 1}, 1.0}});
  CHECK(max_abs(dual_action(spec, g, a * b) - dual_action(spec, g, a) * dual_action(spec, g, b)) <= 1e-12);
  const double phi = 2 * kPi * g(0);
  CHECK(op_norm(a - dual_action(spec, g, a)) == doctest::Approx(std::abs(1.0 - std::polar(1.0, phi))));

  // Theta = 0: W_z W_z^* commute, spectrum in the cube roots of unity
  const auto flat = FuzzyTorusSpec::flat(2, 3);
  const CMatrix w = represent(flat, {{{1, 0}, 1.0}});
  const CMatrix h = w + w.adjoint();
  double closed = 0.0;
  for (int k = 0; k < 3; ++k) {
    const cplx lam = std::polar(1.0, 2 * kPi * k / 3);
    closed = std::max(closed, 2 * std::abs(((1.0 - std::polar(1.0, phi)) * lam).real()));
  }
  CHECK(op_norm(h - dual_action(flat, g, h)) == doctest::Approx(closed));

  CHECK(torus_length(g) == doctest::Approx(std::sqrt(2.0) / 3));

  const FiniteSpectralTriple t = dirac(spec);
  const KPrimeFit fit = fit_kprime(spec, t, 16);
  CHECK(fit.samples == 16);
  CHECK(fit.max_ratio > 0.0);
  CHECK(fit.kprime == doctest::Approx(1.1 * fit.max_ratio));
}

TEST_CASE("bridge operators") {
  const auto spec = twisted(5, 1);
  const Index n = spec.dim();
  CHECK(max_abs(bridge_x(spec, 2) - CMatrix::Identity(n, n)) == 0.0);
  const CMatrix x = bridge_x(spec, 1);
  CHECK(op_norm(x) == doctest::Approx(1.0));
  CHECK(max_abs(x * x - x) == 0.0);
  CHECK(herm_eigenvalues(HermMatrix(x)).minCoeff() >= 0.0);
  CHECK(max_abs(commutator(x, represent(spec, {{{0, 0}, 1.0}}))) == 0.0);
  const CMatrix soft = bridge_x(spec, 0, 1.5);
  CHECK(op_norm(soft) == doctest::Approx(1.0));
  CHECK(soft.diagonal().real().minCoeff() >= 0.0);
  CHECK_THROWS_AS(bridge_x(spec, -1), DomainError);

  for (double eps : {0.1, 0.6}) {
    const BridgeChoice bc = choose_bridge(spec, eps);
    CHECK((bc.worst_ratio <= eps || bc.full));
  }
}

TEST_CASE("bridge tunnels over fuzzy tori") {
  const auto a = twisted(3, 0), b = twisted(3, 1);
  const FiniteSpectralTriple ta = dirac(a);
  TunnelOptions to;
  to.quotient_samples = 10;
  const Tunnel self = bridge_tunnel(ta, ta, bridge_x(a, 1), 0.3, to);
  for (const auto& q : self.quotient_checks) CHECK(q.rel_error <= 1e-3);
  // neighbors on the 1/m lattice are far apart for small m: no lift within eps
  CHECK_THROWS_AS(bridge_tunnel(ta, dirac(b), bridge_x(a, 1), 0.3, to), ValidationError);
}

TEST_CASE("continuity experiment") {
  ContinuityOptions o;
  o.theta_values = {0.0};
  o.fd_levels = 3;
  const auto single = continuity_experiment(perturbed(3), o);
  REQUIRE(single.cells.size() == 1);
  CHECK(single.cells[0].bound == 0.0);
  CHECK(single.cells[0].kind == "self");
  CHECK(single.level_max_diff.size() == 3);
  CHECK(single.ratios.size() == 2);
  for (double r : single.ratios) CHECK(r > 1.5);
  bool interp = false;
  for (const auto& row : single.fd) interp = interp || row.interpolated;
  CHECK(interp);

  ContinuityOptions bad = o;
  bad.theta_values = {0.0, 0.1};
  bad.fd_levels = 1;
  const auto rejected = continuity_experiment(perturbed(3), bad);
  REQUIRE(rejected.cells.size() == 1);
  CHECK(rejected.cells[0].status.rfind("rejected", 0) == 0);
}
