// qmg: command-line driver. Every run writes <command>.manifest.json plus CSV/JSON outputs.
#include <omp.h>

#include <CLI11.hpp>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "qmg/covariant.hpp"
#include "qmg/errors.hpp"
#include "qmg/io.hpp"
#include "qmg/kantorovich.hpp"
#include "qmg/oracle.hpp"
#include "qmg/qtorus.hpp"
#include "qmg/random.hpp"
#include "qmg/triple.hpp"
#include "qmg/tunnel.hpp"

namespace fs = std::filesystem;
using namespace qmg;
using io::json;

namespace {

struct Common {
  std::string out;
  std::uint64_t seed = 1;
  int threads = 0;

  fs::path dir() const {
    if (!out.empty()) return out;
    if (const char* env = std::getenv("QMG_OUTPUT_DIR"); env && *env) return env;
    return "qmg_out";
  }
};

json conic_json(const conic::Diagnostics& d) {
  json j = {{"iterations", d.iterations},  {"primal_residual", d.primal_residual},
            {"dual_residual", d.dual_residual}, {"gap", d.gap},
            {"converged", d.converged},   {"status", d.status}};
  if (d.upper_bound) j["upper_bound"] = *d.upper_bound;
  return j;
}

AlgState parse_state(const std::string& s, Index n) {
  const auto colon = s.find(':');
  const std::string kind = s.substr(0, colon);
  const std::string arg = colon == std::string::npos ? "" : s.substr(colon + 1);
  try {
    if (kind == "pure") {
      const long k = std::stol(arg);
      if (k < 0 || k >= n) throw DomainError("state " + s + ": index out of range");
      return basis_state(n, k);
    }
    if (kind == "random") return random_state(n, std::stoull(arg));
    if (kind == "randpure") return random_pure_state(n, std::stoull(arg));
  } catch (const std::logic_error& e) {
    if (dynamic_cast<const DomainError*>(&e)) throw;
    throw DomainError("state " + s + ": bad argument");
  }
  if (kind == "mixed") return maximally_mixed(n);
  throw DomainError("state " + s + ": expected pure:k, mixed, random:seed or randpure:seed");
}

HermMatrix direction(const FiniteSpectralTriple& t, const std::string& how, std::uint64_t seed) {
  CMatrix h;
  if (how == "dirac") {
    h = t.dirac().mat();
  } else if (how == "random") {
    Rng rng(seed);
    h = random_hermitian(rng, t.dim()).mat();
  } else {
    throw DomainError("direction must be dirac or random");
  }
  const double n = op_norm(h);
  if (!(n > 0.0)) throw DomainError("perturbation direction vanishes");
  return HermMatrix::symmetrized(h / n);
}

ExtentOptions extent_options(int outer, int restarts, int rounds, std::uint64_t seed) {
  ExtentOptions o;
  o.outer = outer;
  o.restarts = restarts;
  o.rounds = rounds;
  o.seed = seed;
  return o;
}

void finish(io::Manifest& m, const fs::path& dir, const std::string& command) {
  const fs::path p = dir / (command + ".manifest.json");
  m.save(p);
  std::cout << "manifest: " << p.string() << '\n';
}

void save_csv(io::Manifest& m, const io::CsvTable& t, const fs::path& path) {
  t.save(path);
  m.output(path.string());
  std::cout << "wrote " << path.string() << '\n';
}

// ---------------------------------------------------------------- subcommands

int check_triple(const Common& c, const std::string& in) {
  io::Manifest m("check-triple");
  m.input(in);
  m.option("in", in);
  const auto doc = io::load_triple(in);
  const auto t = doc.build();
  MetricReport rep;
  {
    auto timer = m.time("check_metric");
    rep = check_metric(t, 64, c.seed);
  }
  m.seed("leibniz", c.seed);
  json report = {{"metric", rep.metric},         {"leibniz", rep.leibniz},
                 {"kernel_dim", rep.kernel_dim}, {"gap_ratio", rep.gap_ratio},
                 {"worst_leibniz_slack", rep.worst_leibniz_slack}, {"messages", rep.messages}};
  if (rep.passed()) {
    auto timer = m.time("bundle");
    const BundleReport b = check_bundle(mvb(t));
    report["bundle"] = {{"passed", b.passed}, {"slack_a", b.slack_a}, {"slack_c", b.slack_c}, {"slack_d", b.slack_d}};
  }
  m.result("report", report);
  io::write_json(report, c.dir() / "check_triple.json");
  m.output((c.dir() / "check_triple.json").string());
  finish(m, c.dir(), "check-triple");
  std::cout << (rep.passed() ? "PASS" : "FAIL") << " metric=" << rep.metric << " leibniz=" << rep.leibniz
            << " kernel_dim=" << rep.kernel_dim << '\n';
  return rep.passed() ? 0 : 1;
}

int distance(const Common& c, const std::string& in, const std::vector<std::string>& states) {
  if (states.size() != 2) throw DomainError("--states needs exactly two state specs");
  io::Manifest m("distance");
  m.input(in);
  m.option("in", in);
  m.option("states", states);
  const auto t = io::load_triple(in).build();
  const AlgState a = parse_state(states[0], t.dim()), b = parse_state(states[1], t.dim());
  MkResult r;
  {
    auto timer = m.time("mk_distance");
    r = mk_distance(t, a, b);
  }
  m.diagnostic("mk_distance", conic_json(r.diag));
  m.result("value", r.value);
  m.result("upper_bound", r.upper_bound);
  finish(m, c.dir(), "distance");
  std::cout << io::format_double(r.value) << '\n';
  return 0;
}

int diameter_cmd(const Common& c, const std::string& in, int restarts, int rounds) {
  io::Manifest m("diameter");
  m.input(in);
  m.option("in", in);
  m.option("restarts", restarts);
  m.option("rounds", rounds);
  m.seed("diameter", c.seed);
  const auto t = io::load_triple(in).build();
  DiameterOptions o;
  o.restarts = restarts;
  o.rounds = rounds;
  o.seed = c.seed;
  DiameterResult r;
  {
    auto timer = m.time("diameter");
    r = diameter(t, o);
  }
  m.result("value", r.value);
  m.result("solves", r.solves);
  finish(m, c.dir(), "diameter");
  std::cout << io::format_double(r.value) << '\n';
  return 0;
}

struct ExtentFlags {
  std::string other;
  std::string recipe = "perturbation";
  double tnorm = 0.05;  // as a fraction of 1/(2r)
  std::string dir = "random";
  double eps = 0.3;
  int outer = 32, restarts = 4, rounds = 2;
};

int tunnel_extent(const Common& c, const std::string& in, const ExtentFlags& f) {
  io::Manifest m("tunnel-extent");
  m.input(in);
  m.option("in", in);
  m.option("recipe", f.recipe);
  m.option("outer", f.outer);
  m.option("restarts", f.restarts);
  m.option("rounds", f.rounds);
  m.seed("extent", c.seed);
  const auto t = io::load_triple(in).build();
  Tunnel tun;
  {
    auto timer = m.time("construct");
    if (f.recipe == "identity") {
      tun = identity_tunnel(t);
    } else if (f.recipe == "perturbation") {
      const double r = diameter(t).value;
      const double tn = f.tnorm / (2 * r);
      m.option("tnorm_fraction", f.tnorm);
      m.option("direction", f.dir);
      m.result("diameter", r);
      m.result("t_norm", tn);
      PerturbationOptions po;
      po.diameter = r;
      tun = perturbation_tunnel(t, direction(t, f.dir, c.seed) * tn, po);
    } else if (f.recipe == "bridge") {
      if (f.other.empty()) throw DomainError("bridge recipe needs --other");
      m.input(f.other);
      m.option("other", f.other);
      m.option("eps", f.eps);
      const auto t2 = io::load_triple(f.other).build();
      tun = bridge_tunnel(t, t2, CMatrix::Identity(t.dim(), t2.dim()), f.eps);
    } else {
      throw DomainError("recipe must be identity, perturbation or bridge");
    }
  }
  ExtentEstimate e;
  {
    auto timer = m.time("extent_estimate");
    e = extent_estimate(tun, extent_options(f.outer, f.restarts, f.rounds, c.seed));
  }
  io::CsvTable csv({"target", "index", "round", "weight", "distance", "witness_norm", "converged"});
  for (const auto& s : e.samples)
    csv.row().add(s.target == Side::Left ? "left" : "right").add(s.index).add(s.round).add(s.weight).add(s.distance)
        .add(s.witness_norm).add(s.converged);
  save_csv(m, csv, c.dir() / "tunnel_extent_samples.csv");
  m.result("extent_estimate", e.value);
  if (e.analytic_bound) m.result("analytic_bound", *e.analytic_bound);
  m.diagnostic("unconverged", e.unconverged);
  finish(m, c.dir(), "tunnel-extent");
  std::cout << "extent_estimate " << io::format_double(e.value);
  if (e.analytic_bound) std::cout << " analytic_bound " << io::format_double(*e.analytic_bound);
  std::cout << '\n';
  return 0;
}

int perturb_sweep(const Common& c, const std::string& in, double tmax, int steps, const std::string& dir,
                  bool estimate, int outer) {
  if (steps < 1 || !(tmax > 0.0)) throw DomainError("need --steps >= 1 and --tmax > 0");
  io::Manifest m("perturb-sweep");
  m.input(in);
  m.option("in", in);
  m.option("tmax", tmax);
  m.option("steps", steps);
  m.option("direction", dir);
  m.option("estimate", estimate);
  m.option("outer", outer);
  m.seed("direction", c.seed);
  m.seed("extent", c.seed + 1);
  const auto t = io::load_triple(in).build();
  double r = 0.0;
  {
    auto timer = m.time("diameter");
    r = diameter(t).value;
  }
  m.result("diameter", r);
  const HermMatrix u = direction(t, dir, c.seed);
  io::CsvTable csv({"step", "t_norm", "radius", "two_r_t", "bound", "extent_estimate", "status"});
  auto timer = m.time("sweep");
  for (int k = 1; k <= steps; ++k) {
    const double tn = tmax * k / steps;
    const double x = 2 * r * tn;
    auto& row = csv.row().add(k).add(tn).add(r).add(x);
    if (x >= 1.0) {
      row.add(std::nan("")).add(std::nan("")).add("out_of_range");
      continue;
    }
    row.add(perturbation_bound(r, tn));
    if (!estimate) {
      row.add(std::nan("")).add("bound_only");
      continue;
    }
    try {
      PerturbationOptions po;
      po.diameter = r;
      const Tunnel tun = perturbation_tunnel(t, u * tn, po);
      row.add(extent_estimate(tun, extent_options(outer, 2, 1, c.seed + 1)).value).add("ok");
    } catch (const ValidationError& e) {
      row.add(std::nan("")).add(std::string("rejected: ") + e.what());
    }
  }
  save_csv(m, csv, c.dir() / "perturb_sweep.csv");
  finish(m, c.dir(), "perturb-sweep");
  return 0;
}

int covariant_magnitude(const Common& c, const std::string& in, double tnorm, double eps, double step,
                        bool propinquity, int outer, int samples) {
  io::Manifest m("covariant-magnitude");
  m.input(in);
  m.option("in", in);
  m.option("tnorm_fraction", tnorm);
  m.option("eps", eps);
  m.option("time_step", step);
  m.option("outer", outer);
  m.option("samples", samples);
  m.seed("direction", c.seed);
  const auto t = io::load_triple(in).build();
  const double r = diameter(t).value;
  const HermMatrix T = direction(t, "random", c.seed) * (tnorm / (2 * r));
  ModularOptions mo;
  mo.perturbation.diameter = r;
  MagnitudeOptions mg;
  mg.extent = extent_options(outer, 2, 1, c.seed + 1);
  mg.reach.samples = samples;
  mg.reach.seed = c.seed + 2;
  mg.time_step = step;
  m.seed("extent", c.seed + 1);
  m.seed("reach", c.seed + 2);
  io::CsvTable csv({"eps", "extent", "scalar_extent", "reach", "magnitude", "time_points"});
  {
    auto timer = m.time("magnitude");
    const ModularTunnel tun = modular_tunnel_perturbation(t, T, mo);
    const Magnitude mag = magnitude(tun, eps, mg);
    csv.row().add(mag.eps).add(mag.extent).add(mag.scalar_extent).add(mag.reach).add(mag.value).add(mag.time_points);
    m.result("magnitude", mag.value);
  }
  if (propinquity) {
    auto timer = m.time("propinquity");
    PropinquityOptions po;
    po.modular = mo;
    po.magnitude = mg;
    const PropinquityBound b = spectral_propinquity_upper_bound(t, t.with_dirac(t.dirac() + T), po);
    m.result("propinquity_upper_bound", b.value);
    m.result("propinquity_capped", b.capped);
    m.diagnostic("propinquity_messages", b.messages);
    for (const auto& e : b.evaluations)
      csv.row().add(e.eps).add(e.extent).add(e.scalar_extent).add(e.reach).add(e.value).add(e.time_points);
    std::cout << "propinquity_upper_bound " << io::format_double(b.value) << (b.capped ? " (capped)" : "") << '\n';
  }
  save_csv(m, csv, c.dir() / "covariant_magnitude.csv");
  finish(m, c.dir(), "covariant-magnitude");
  return 0;
}

struct TorusFlags {
  std::vector<double> thetas;
  std::vector<double> scales{1.0};
  double eps = 0.2;
  int fd_levels = 4;
  double fd_step = 0.04, fd_span = 0.16, fd_origin = 0.0;
  int outer = 8, samples = 4;
};

int torus_sweep(const Common& c, const std::string& in, const TorusFlags& f) {
  io::Manifest m("torus-sweep");
  m.input(in);
  const auto doc = io::load_torus(in);
  m.option("in", in);
  m.option("spec", io::torus_to_json(doc));
  m.option("thetas", f.thetas);
  m.option("scales", f.scales);
  m.option("eps", f.eps);
  m.option("fd_levels", f.fd_levels);
  m.option("fd_step", f.fd_step);
  m.option("fd_span", f.fd_span);
  m.option("fd_origin", f.fd_origin);
  m.seed("cells", c.seed);

  torus::ContinuityOptions o;
  o.theta_values = f.thetas.empty() ? std::vector<double>{doc.spec.theta(0, 1)} : f.thetas;
  o.t_scales = f.scales;
  o.eps = f.eps;
  o.elements = doc.elements;
  o.fd_levels = f.fd_levels;
  o.fd_step = f.fd_step;
  o.fd_span = f.fd_span;
  o.fd_origin = f.fd_origin;
  o.seed = c.seed;
  o.propinquity.magnitude.extent = extent_options(f.outer, 1, 1, c.seed);
  o.propinquity.magnitude.reach.samples = f.samples;
  o.propinquity.modular.tunnel.quotient_samples = 10;

  // structural checks recorded alongside the sweep
  {
    auto timer = m.time("structure");
    const auto spec = doc.spec;
    double phase = 0.0, interior = 0.0, wrap = 0.0;
    for (const auto& z : torus::all_frequencies(spec.d, spec.m)) {
      const CMatrix wz = torus::weyl(spec, z);
      for (const auto& w : torus::all_frequencies(spec.d, spec.m)) {
        const CMatrix ww = torus::weyl(spec, w);
        phase = std::max(phase, (wz * ww - torus::commutation_phase(spec, z, w) * ww * wz).cwiseAbs().maxCoeff());
      }
      for (int j = 0; j < spec.d; ++j) {
        const auto chk = torus::derivation_check(spec, j, z);
        interior = std::max(interior, chk.interior_error);
        wrap = std::max(wrap, chk.wrap_defect);
      }
    }
    m.diagnostic("weyl_phase_residual", phase);
    m.diagnostic("derivation_interior_error", interior);
    m.diagnostic("window_wrap_defect", wrap);
    m.diagnostic("clifford_residual", torus::gammas(spec.d).residual);
    const auto t = torus::dirac(spec);
    const auto fit = torus::fit_kprime(spec, t, 32, c.seed);
    m.result("kprime", fit.kprime);
    m.result("kprime_max_ratio", fit.max_ratio);
  }

  torus::ContinuityReport rep;
  {
    auto timer = m.time("continuity");
    rep = torus::continuity_experiment(doc.spec, o);
  }
  std::vector<std::string> head{"theta_id", "t_id", "kind", "theta_a", "theta_b", "t_a", "t_b",
                                "bound", "extent_estimate", "reach", "magnitude"};
  for (const auto& e : rep.elements) head.push_back("L_" + e);
  head.insert(head.end(), {"seed", "status"});
  io::CsvTable cells(head);
  for (const auto& cell : rep.cells) {
    auto& row = cells.row();
    row.add(cell.theta_id).add(cell.t_id).add(cell.kind).add(cell.theta_a).add(cell.theta_b).add(cell.t_a).add(cell.t_b)
        .add(cell.bound).add(cell.extent).add(cell.reach).add(cell.magnitude);
    for (std::size_t k = 0; k < rep.elements.size(); ++k)
      row.add(k < cell.l_values.size() ? cell.l_values[k] : std::nan(""));
    row.add(cell.seed).add(cell.status);
  }
  save_csv(m, cells, c.dir() / "torus_cells.csv");

  std::vector<std::string> fhead{"level", "step", "theta", "interpolated"};
  for (const auto& e : rep.elements) fhead.push_back("L_" + e);
  for (const auto& e : rep.elements) fhead.push_back("diff_" + e);
  io::CsvTable fd(fhead);
  for (const auto& r : rep.fd) {
    auto& row = fd.row();
    row.add(r.level).add(r.step).add(r.theta).add(r.interpolated);
    for (double v : r.l_values) row.add(v);
    for (std::size_t k = 0; k < rep.elements.size(); ++k) row.add(k < r.diffs.size() ? r.diffs[k] : std::nan(""));
  }
  save_csv(m, fd, c.dir() / "torus_fd.csv");

  io::CsvTable summary({"level", "step", "max_diff", "ratio_to_next"});
  for (std::size_t l = 0; l < rep.level_max_diff.size(); ++l)
    summary.row().add(static_cast<int>(l)).add(f.fd_step / std::pow(2.0, static_cast<double>(l)))
        .add(rep.level_max_diff[l]).add(l < rep.ratios.size() ? rep.ratios[l] : std::nan(""));
  save_csv(m, summary, c.dir() / "torus_fd_summary.csv");
  m.result("fd_ratios", rep.ratios);
  finish(m, c.dir(), "torus-sweep");
  return 0;
}

int oracle_compare(const Common& c, const std::string& in, int pairs, int samples) {
  io::Manifest m("oracle-compare");
  m.input(in);
  m.option("in", in);
  m.option("pairs", pairs);
  m.option("samples", samples);
  m.seed("states", c.seed);
  const auto t = io::load_triple(in).build();
  const SeminormSpec spec = lip_seminorm(t);
  io::CsvTable csv({"pair", "solver", "upper_bound", "oracle", "rel_gap", "converged"});
  double worst = 0.0;
  auto timer = m.time("compare");
  for (int k = 0; k < pairs; ++k) {
    const AlgState a = random_state(t.dim(), mix_seed(c.seed, 2 * k)), b = random_state(t.dim(), mix_seed(c.seed, 2 * k + 1));
    const MkResult r = mk_distance(spec, a, b);
    oracle::Options oo;
    oo.samples = samples;
    oo.seed = mix_seed(c.seed, 1000 + k);
    const double o = oracle::mk_distance(spec, a, b, oo).value;
    const double gap = r.value > 0 ? std::abs(r.value - o) / r.value : std::abs(o);
    worst = std::max(worst, gap);
    csv.row().add(k).add(r.value).add(r.upper_bound).add(o).add(gap).add(r.diag.converged);
  }
  save_csv(m, csv, c.dir() / "oracle_compare.csv");
  m.result("worst_rel_gap", worst);
  finish(m, c.dir(), "oracle-compare");
  std::cout << "worst_rel_gap " << io::format_double(worst) << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"qmg: quantum metric geometry toolkit"};
  app.require_subcommand(1);
  Common common;
  app.add_option("--out", common.out, "output directory (default: $QMG_OUTPUT_DIR or ./qmg_out)");
  app.add_option("--seed", common.seed, "base seed");
  app.add_option("--threads", common.threads, "OpenMP threads (0 = runtime default)");

  std::string in;
  auto* check = app.add_subcommand("check-triple", "metric and Leibniz checks, plus the bundle conditions");
  check->add_option("--in", in, "triple JSON")->required();

  std::vector<std::string> states;
  auto* dist = app.add_subcommand("distance", "Monge-Kantorovich distance between two states");
  dist->add_option("--in", in, "triple JSON")->required();
  dist->add_option("--states", states, "two of pure:k, mixed, random:seed, randpure:seed")->required()->expected(2);

  int restarts = 8, rounds = 6;
  auto* diam = app.add_subcommand("diameter", "diameter of the state space");
  diam->add_option("--in", in, "triple JSON")->required();
  diam->add_option("--restarts", restarts);
  diam->add_option("--rounds", rounds);

  ExtentFlags ef;
  auto* ext = app.add_subcommand("tunnel-extent", "sampled extent of a tunnel");
  ext->add_option("--in", in, "triple JSON")->required();
  ext->add_option("--other", ef.other, "second triple (bridge)");
  ext->add_option("--recipe", ef.recipe)->check(CLI::IsMember({"identity", "perturbation", "bridge"}));
  ext->add_option("--tnorm", ef.tnorm, "perturbation norm as a fraction of 1/(2r)");
  ext->add_option("--direction", ef.dir)->check(CLI::IsMember({"random", "dirac"}));
  ext->add_option("--eps", ef.eps, "bridge eps");
  ext->add_option("--outer", ef.outer);
  ext->add_option("--restarts", ef.restarts);
  ext->add_option("--rounds", ef.rounds);

  double tmax = 0.2;
  int steps = 10, outer = 16;
  std::string pdir = "random";
  bool estimate = false;
  auto* sweep = app.add_subcommand("perturb-sweep", "analytic extent bound (and estimates) along ||T||");
  sweep->add_option("--in", in, "triple JSON")->required();
  sweep->add_option("--tmax", tmax, "largest ||T||");
  sweep->add_option("--steps", steps);
  sweep->add_option("--direction", pdir)->check(CLI::IsMember({"random", "dirac"}));
  sweep->add_flag("--estimate", estimate, "also run extent_estimate per step");
  sweep->add_option("--outer", outer);

  double tnorm = 0.1, eps = 0.3, tstep = 0.5;
  int samples = 4;
  bool prop = false;
  auto* cov = app.add_subcommand("covariant-magnitude", "magnitude of a perturbation modular tunnel");
  cov->add_option("--in", in, "triple JSON")->required();
  cov->add_option("--tnorm", tnorm, "fraction of 1/(2r)");
  cov->add_option("--eps", eps);
  cov->add_option("--time-step", tstep);
  cov->add_option("--outer", outer);
  cov->add_option("--samples", samples);
  cov->add_flag("--propinquity", prop, "also bound the spectral propinquity");

  TorusFlags tf;
  auto* tor = app.add_subcommand("torus-sweep", "fuzzy torus continuity experiment");
  tor->add_option("--in", in, "torus JSON")->required();
  tor->add_option("--thetas", tf.thetas, "admissible theta values (multiples of 1/m)");
  tor->add_option("--scales", tf.scales, "perturbation scale factors");
  tor->add_option("--eps", tf.eps);
  tor->add_option("--fd-levels", tf.fd_levels);
  tor->add_option("--fd-step", tf.fd_step);
  tor->add_option("--fd-span", tf.fd_span);
  tor->add_option("--fd-origin", tf.fd_origin);
  tor->add_option("--outer", tf.outer);
  tor->add_option("--samples", tf.samples);

  int pairs = 5, osamples = 100000;
  auto* orc = app.add_subcommand("oracle-compare", "solver against the brute-force oracle on random state pairs");
  orc->add_option("--in", in, "triple JSON")->required();
  orc->add_option("--pairs", pairs);
  orc->add_option("--samples", osamples);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }
  if (common.threads > 0) omp_set_num_threads(common.threads);

  try {
    if (*check) return check_triple(common, in);
    if (*dist) return distance(common, in, states);
    if (*diam) return diameter_cmd(common, in, restarts, rounds);
    if (*ext) return tunnel_extent(common, in, ef);
    if (*sweep) return perturb_sweep(common, in, tmax, steps, pdir, estimate, outer);
    if (*cov) return covariant_magnitude(common, in, tnorm, eps, tstep, prop, outer, samples);
    if (*tor) return torus_sweep(common, in, tf);
    if (*orc) return oracle_compare(common, in, pairs, osamples);
  } catch (const SolverError& e) {
    std::cerr << "solver failure: " << e.what() << '\n';
    return 2;
  } catch (const SchemaError& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return 1;
  } catch (const ValidationError& e) {
    std::cerr << "validation failure: " << e.what() << '\n';
    return 1;
  } catch (const DomainError& e) {
    std::cerr << "invalid argument: " << e.what() << '\n';
    return 1;
  } catch (const ContractViolation& e) {
    std::cerr << "contract violation: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
