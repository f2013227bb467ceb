// Acceptance run: one PASS/FAIL line per criterion, exit status 0 only if all pass.
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "qmg/covariant.hpp"
#include "qmg/errors.hpp"
#include "qmg/io.hpp"
#include "qmg/kantorovich.hpp"
#include "qmg/modular.hpp"
#include "qmg/oracle.hpp"
#include "qmg/qtorus.hpp"
#include "qmg/random.hpp"
#include "qmg/tunnel.hpp"

using namespace qmg;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

fs::path fixture(const std::string& name) { return fs::path(QMG_FIXTURE_DIR) / name; }

fs::path output_dir() {
  if (const char* env = std::getenv("QMG_OUTPUT_DIR"); env && *env) return env;
  return fs::current_path() / "acceptance_out";
}

const std::vector<std::string> kTripleFixtures{"two_point_0p5", "two_point_1", "two_point_2", "path4", "m2_spin"};

FiniteSpectralTriple load(const std::string& name) { return io::load_triple(fixture(name + ".json")).build(); }

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(4);
  os << v;
  return os.str();
}

// Random metric triple: diagonal or full matrix algebra with a random Dirac operator.
FiniteAlgebra m2_on_c4() {
  std::vector<CMatrix> basis;
  for (Index i = 0; i < 2; ++i)
    for (Index j = 0; j < 2; ++j) {
      CMatrix unit = CMatrix::Zero(2, 2);
      unit(i, j) = 1.0;
      basis.push_back(kron(unit, CMatrix::Identity(2, 2)));
    }
  return FiniteAlgebra::from_basis(4, std::move(basis));
}

FiniteSpectralTriple random_metric_triple(std::uint64_t seed, Index max_dim) {
  for (std::uint64_t attempt = 0;; ++attempt) {
    Rng rng(seed, attempt);
    // A full algebra on its own space always commutes with polynomials in D, so the
    // noncommutative draws use M2 x 1 on C^4 instead.
    const bool noncommutative = rng.uniform() < 0.5 && max_dim >= 4;
    const Index n = noncommutative ? 4 : rng.integer(2, static_cast<int>(max_dim));
    FiniteAlgebra alg = noncommutative ? m2_on_c4() : FiniteAlgebra::diagonal(n);
    FiniteSpectralTriple t(alg, random_hermitian(rng, n));
    if (check_metric(t, 0).metric) return t;
  }
}

Outcome two_point_oracle() {
  double worst = 0.0;
  for (auto [name, d] : std::vector<std::pair<std::string, double>>{{"two_point_0p5", 0.5}, {"two_point_1", 1.0}, {"two_point_2", 2.0}}) {
    const auto t = load(name);
    worst = std::max(worst, std::abs(mk_distance(t, basis_state(2, 0), basis_state(2, 1)).value - d));
    worst = std::max(worst, std::abs(diameter(t).value - d));
  }
  return {worst <= 1e-6, "max |value - d| = " + fmt(worst)};
}

Outcome solver_vs_bruteforce() {
  double worst = 0.0;
  for (std::uint64_t i = 0; i < 20; ++i) {
    const auto t = random_metric_triple(1000 + i, 4);
    const SeminormSpec spec = lip_seminorm(t);
    const AlgState a = random_state(t.dim(), mix_seed(7, 2 * i)), b = random_state(t.dim(), mix_seed(7, 2 * i + 1));
    const double s = mk_distance(spec, a, b).value;
    oracle::Options o;
    o.samples = 100000;
    o.seed = mix_seed(8, i);
    const double brute = oracle::mk_distance(spec, a, b, o).value;
    worst = std::max(worst, std::abs(s - brute) / s);
  }
  return {worst <= 1e-3, "max relative gap = " + fmt(worst)};
}

Outcome leibniz_suites() {
  double worst_alg = 1e300, worst_mod = 1e300;
  for (int k = 0; k < 1000; ++k) {
    const auto t = random_metric_triple(5000 + k / 50, 8);
    Rng rng(6000, k);
    const auto& alg = t.algebra();
    const Index m = static_cast<Index>(alg.sa_basis().size());
    const HermMatrix a = alg.from_sa(gaussian_vector(rng, m)), b = alg.from_sa(gaussian_vector(rng, m));
    const double la = lip(t, a), lb = lip(t, b), na = op_norm(a), nb = op_norm(b);
    const CMatrix ab = a.mat() * b.mat(), ba = b.mat() * a.mat();
    const double bound = na * lb + nb * la;
    worst_alg = std::min(worst_alg, bound - lip(t, HermMatrix::symmetrized((ab + ba) / 2.0)));
    worst_alg = std::min(worst_alg, bound - lip(t, HermMatrix::symmetrized((ab - ba) / cplx(0.0, 2.0))));

    const CVector xi = complex_gaussian(rng, t.dim());
    const double lhs = dnorm(t.dirac(), a.mat() * xi);
    worst_mod = std::min(worst_mod, (na + la) * dnorm(t.dirac(), xi) - lhs);
  }
  return {worst_alg >= -1e-9 && worst_mod >= -1e-9,
          "min slack algebra = " + fmt(worst_alg) + ", module = " + fmt(worst_mod)};
}

Outcome bundle_conditions() {
  double a = 1e300, c = 1e300, d = 1e300;
  bool ok = true;
  for (const auto& name : kTripleFixtures) {
    const BundleReport r = check_bundle(mvb(load(name)), 200);
    ok = ok && r.passed;
    a = std::min(a, r.slack_a);
    c = std::min(c, r.slack_c);
    d = std::min(d, r.slack_d);
  }
  ok = ok && a >= -1e-9 && c >= -1e-9 && d >= -1e-9;
  return {ok, "min slacks a=" + fmt(a) + " c=" + fmt(c) + " d=" + fmt(d)};
}

Outcome perturbation_bound_check() {
  bool ok = true;
  double worst_excess = -1e300, worst_rise = -1e300;
  for (const char* name : {"two_point_1", "path4"}) {
    const auto t = load(name);
    const double r = diameter(t).value;
    Rng rng(77);
    HermMatrix T = random_hermitian(rng, t.dim());
    T = T * (1.0 / op_norm(T));
    ExtentOptions eo;
    eo.outer = 32;
    eo.restarts = 4;
    eo.rounds = 2;
    double prev = 0.0;
    for (double frac : {0.01, 0.05, 0.1}) {
      const double tn = frac / (2 * r);
      PerturbationOptions po;
      po.diameter = r;
      const Tunnel tun = perturbation_tunnel(t, T * tn, po);
      const double est = extent_estimate(tun, eo).value;
      const double bound = perturbation_bound(r, tn);
      worst_excess = std::max(worst_excess, est - bound);
      // listed from the smallest ||T||: the estimate shrinks as ||T|| does
      worst_rise = std::max(worst_rise, prev - est);
      prev = est;
    }
  }
  ok = worst_excess <= 1e-2 && worst_rise <= 1e-3;
  return {ok, "max (estimate - bound) = " + fmt(worst_excess) + ", max monotonicity defect = " + fmt(worst_rise)};
}

Outcome kato() {
  double worst = 1e300;
  for (const auto& name : kTripleFixtures) {
    const auto t = load(name);
    for (std::uint64_t s = 0; s < 3; ++s) {
      Rng rng(900 + s);
      HermMatrix T = random_hermitian(rng, t.dim());
      T = T * (rng.uniform(0.01, 0.1) / op_norm(T));
      worst = std::min(worst, kato_check(t.dirac(), T, uniform_times(5.0, 100), 100, 41 + s).worst_slack);
    }
  }
  return {worst >= -1e-9, "min slack = " + fmt(worst)};
}

Outcome self_distance() {
  double worst = 0.0;
  std::vector<FiniteSpectralTriple> all;
  for (const auto& name : kTripleFixtures) all.push_back(load(name));
  for (const char* name : {"torus_m3.json", "torus_m5.json"}) all.push_back(torus::dirac(io::load_torus(fixture(name)).spec));
  for (const auto& t : all) worst = std::max(worst, spectral_propinquity_upper_bound(t, t).value);
  return {worst <= 0.01, "max self bound = " + fmt(worst) + " (grid step 0.01)"};
}

// two points at distance 1.1
FiniteSpectralTriple two_point_variant() { return {FiniteAlgebra::diagonal(2), HermMatrix(CMatrix(pauli(1) / 1.1))}; }

Outcome reach_vs_extent() {
  std::vector<ModularTunnel> tunnels;
  for (const char* name : {"two_point_0p5", "two_point_1", "path4"}) {
    const auto t = load(name);
    const double r = diameter(t).value;
    Rng rng(31);
    HermMatrix T = random_hermitian(rng, t.dim());
    T = T * (0.1 / (2 * r) / op_norm(T));
    ModularOptions mo;
    mo.perturbation.diameter = r;
    tunnels.push_back(modular_tunnel_perturbation(t, T, mo));
  }
  tunnels.push_back(modular_tunnel_bridge(load("two_point_1"), two_point_variant(), CMatrix::Identity(2, 2), 0.3));
  double worst = -1e300;
  for (const auto& tun : tunnels) {
    ReachOptions ro;
    ro.samples = 32;
    const double reach = modular_reach(tun, ro).value;
    const double ext = extent_estimate(tun.scalar).value;
    worst = std::max(worst, reach - 2 * ext);
  }
  return {worst <= 5e-3, std::to_string(tunnels.size()) + " tunnels, max (reach - 2 extent) = " + fmt(worst)};
}

Outcome composition() {
  const auto grid = ProperMonoidGrid::reals(0.05, 50.0);
  int failures = 0;
  for (std::uint64_t i = 0; i < 100; ++i) {
    Rng rng(4242, i);
    const double e1 = rng.uniform(0.05, 0.35), e2 = rng.uniform(0.05, 0.35);
    const auto p = random_perturbed_identity(grid, e1, 2 * i), q = random_perturbed_identity(grid, e2, 2 * i + 1);
    try {
      const auto pq = compose_almost_isometries(p, q, grid, grid);
      if (!verify_almost_isometry(pq, grid, grid).passed || std::abs(pq.eps - (e1 + e2)) > 1e-12) ++failures;
    } catch (const std::exception&) {
      ++failures;
    }
  }
  return {failures == 0, std::to_string(failures) + " failures in 100 compositions"};
}

Outcome torus_structure() {
  double phase = 0.0, interior = 0.0, clifford = torus::gammas(2).residual;
  for (int m : {3, 5})
    for (int k = 0; k < m; ++k) {
      const auto spec = torus::with_theta(torus::FuzzyTorusSpec::flat(2, m), double(k) / m);
      const auto freqs = torus::all_frequencies(2, m);
      for (const auto& z : freqs) {
        const CMatrix wz = torus::weyl(spec, z);
        for (const auto& w : freqs) {
          const CMatrix ww = torus::weyl(spec, w);
          phase = std::max(phase, (wz * ww - torus::commutation_phase(spec, z, w) * ww * wz).cwiseAbs().maxCoeff());
        }
        for (int j = 0; j < 2; ++j) interior = std::max(interior, torus::derivation_check(spec, j, z).interior_error);
      }
    }

  // finite differences, written to CSV and read back
  bool trend = true;
  std::string ratios;
  for (const char* name : {"torus_m3", "torus_m5"}) {
    const auto doc = io::load_torus(fixture(std::string(name) + ".json"));
    torus::ContinuityOptions o;
    o.theta_values = {0.0};
    o.elements = doc.elements;
    o.fd_levels = 4;
    const auto rep = torus::continuity_experiment(doc.spec, o);
    io::CsvTable csv({"level", "step", "max_diff"});
    for (std::size_t l = 0; l < rep.level_max_diff.size(); ++l)
      csv.row().add(static_cast<int>(l)).add(o.fd_step / std::pow(2.0, static_cast<double>(l))).add(rep.level_max_diff[l]);
    const fs::path path = output_dir() / (std::string(name) + "_fd_summary.csv");
    csv.save(path);

    std::ifstream in(path);
    std::string line;
    std::getline(in, line);
    std::vector<double> diffs;
    while (std::getline(in, line)) diffs.push_back(std::stod(line.substr(line.rfind(',') + 1)));
    for (std::size_t l = 0; l + 1 < diffs.size(); ++l) {
      const double ratio = diffs[l] / diffs[l + 1];
      trend = trend && ratio >= 2.0;
      ratios += (ratios.empty() ? "" : " ") + fmt(ratio);
    }
  }
  const bool exact = phase <= 1e-10 && interior <= 1e-10 && clifford <= 1e-10;
  return {exact && trend, "phase " + fmt(phase) + ", derivation " + fmt(interior) + ", clifford " + fmt(clifford) +
                              "; fd ratios per halving [" + ratios + "] (need >= 2)"};
}

Outcome sandwich() {
  double low_gap = 1e300, high_gap = -1e300;
  int pairs = 0;
  for (const char* name : {"two_point_1", "path4", "m2_spin", "two_point_2"}) {
    const HermMatrix D = load(name).dirac();
    for (std::uint64_t i = 0; i < 50; ++i, ++pairs) {
      const CVector w = sample_unit_vector(D, 500 + pairs, 0), e = sample_unit_vector(D, 500 + pairs, 1);
      const CVector v = w - e;
      const double k = dual_dnorm(v, D).value;
      double sup = 0.0;
      for (std::uint64_t j = 0; j < 2000; ++j) sup = std::max(sup, std::abs(sample_unit_vector(D, 9000 + pairs, j).dot(v)));
      low_gap = std::min(low_gap, k - sup);
      high_gap = std::max(high_gap, k - std::sqrt(2.0) * sup);
    }
  }
  return {low_gap >= 0.0 && high_gap <= 5e-3,
          std::to_string(pairs) + " pairs, min (k - sampled) = " + fmt(low_gap) + ", max (k - sqrt2 sampled) = " + fmt(high_gap)};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double limit_s;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> all{
      {1, "two-point distance and diameter", 5, two_point_oracle},
      {2, "solver vs brute-force oracle", 180, solver_vs_bruteforce},
      {3, "Leibniz suites", 60, leibniz_suites},
      {4, "bundle conditions on fixtures", 60, bundle_conditions},
      {5, "perturbation extent bound", 300, perturbation_bound_check},
      {6, "Kato bound", 60, kato},
      {7, "self-distance", 60, self_distance},
      {8, "reach vs extent", 300, reach_vs_extent},
      {9, "almost-isometry composition", 30, composition},
      {10, "fuzzy torus structure and continuity trend", 600, torus_structure},
      {11, "module metric sandwich", 120, sandwich},
  };
  fs::create_directories(output_dir());
  int failed = 0;
  for (const auto& c : all) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = secs <= c.limit_s;
    const bool pass = o.pass && in_time;
    failed += !pass;
    std::cout << (pass ? "PASS" : "FAIL") << "  " << c.id << ". " << c.name << ": " << o.detail << " ["
              << fmt(secs) << " s" << (in_time ? "" : ", over the " + fmt(c.limit_s) + " s limit") << "]" << std::endl;
  }
  std::cout << (all.size() - failed) << "/" << all.size() << " criteria passed" << std::endl;
  return failed == 0 ? 0 : 1;
}
