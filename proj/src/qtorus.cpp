#include "qmg/qtorus.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>

#include "qmg/errors.hpp"
#include "qmg/random.hpp"

namespace qmg::torus {

namespace {

int spinor_qubits(int d) { return std::max(1, d / 2); }

Index ipow(int base, int exp) {
  Index r = 1;
  for (int i = 0; i < exp; ++i) r *= base;
  return r;
}

void check_frequency(const FuzzyTorusSpec& spec, const Frequency& z) {
  if (static_cast<int>(z.size()) != spec.d) throw DomainError("frequency has wrong length");
  for (int v : z)
    if (v < 0 || v >= spec.m) throw DomainError("frequency not reduced mod m");
}

// exp(2 pi i (Theta rep(w)) . rep(z)); a genuine bicharacter only for admissible Theta.
cplx sigma(const FuzzyTorusSpec& spec, const Frequency& w, const Frequency& z) {
  double phase = 0.0;
  for (int i = 0; i < spec.d; ++i)
    for (int j = 0; j < spec.d; ++j)
      phase += spec.theta(i, j) * representative(w[j], spec.m) * representative(z[i], spec.m);
  return std::polar(1.0, 2.0 * kPi * phase);
}

CMatrix lattice_rep(const FuzzyTorusSpec& spec, const WeylSeries& f) {
  const Index n = spec.lattice_size();
  CMatrix out = CMatrix::Zero(n, n);
  for (const auto& term : f) out += term.coeff * weyl(spec, reduce(term.z, spec.m));
  return out;
}

CMatrix spin_lift(const FuzzyTorusSpec& spec, const CMatrix& lattice) {
  return kron(lattice, CMatrix::Identity(spec.spinor_dim(), spec.spinor_dim()));
}

double series_l1(const WeylSeries& f) {
  double s = 0.0;
  for (const auto& t : f) s += std::abs(t.coeff);
  return s;
}

// Low-frequency self-adjoint probes: real and imaginary parts of W_z, max |rep(z_j)| <= 1.
std::vector<CMatrix> low_frequency_probes(const FuzzyTorusSpec& spec) {
  std::vector<CMatrix> out;
  for (const auto& z : all_frequencies(spec.d, spec.m)) {
    int top = 0;
    for (int v : z) top = std::max(top, std::abs(representative(v, spec.m)));
    if (top != 1) continue;
    const CMatrix w = spin_lift(spec, weyl(spec, z));
    out.push_back((w + w.adjoint()) / 2.0);
    out.push_back((w - w.adjoint()) / cplx(0.0, 2.0));
  }
  return out;
}

}  // namespace

FuzzyTorusSpec FuzzyTorusSpec::flat(int d, int m) {
  FuzzyTorusSpec s;
  s.d = d;
  s.m = m;
  s.theta = RMatrix::Zero(d, d);
  return s;
}

Index FuzzyTorusSpec::lattice_size() const { return ipow(m, d); }
Index FuzzyTorusSpec::spinor_dim() const { return ipow(2, spinor_qubits(d)); }

double FuzzyTorusSpec::perturbation_l1() const {
  double s = 0.0;
  for (const auto& t : perturbation) s += series_l1(t);
  return s;
}

bool FuzzyTorusSpec::admissible(double tol) const {
  for (Index i = 0; i < theta.rows(); ++i)
    for (Index j = 0; j < theta.cols(); ++j) {
      const double k = theta(i, j) * m;
      if (std::abs(k - std::round(k)) > tol) return false;
    }
  return true;
}

void validate(const FuzzyTorusSpec& spec, bool require_admissible) {
  if (spec.d < 2) throw DomainError("torus dimension must be at least 2");
  if (spec.m < 2) throw DomainError("torus order must be at least 2");
  if (spec.theta.rows() != spec.d || spec.theta.cols() != spec.d) throw DomainError("Theta has wrong shape");
  if ((spec.theta + spec.theta.transpose()).cwiseAbs().maxCoeff() != 0.0)
    throw DomainError("Theta is not skew-symmetric");
  if (require_admissible && !spec.admissible()) throw DomainError("Theta entries must lie in (1/m) Z");
  if (!spec.perturbation.empty()) {
    if (static_cast<int>(spec.perturbation.size()) != spec.d + 1)
      throw DomainError("perturbation needs d + 1 coefficient series");
    for (const auto& t : spec.perturbation)
      for (const auto& term : t)
        if (static_cast<int>(term.z.size()) != spec.d) throw DomainError("perturbation frequency has wrong length");
    if (spec.perturbation_l1() >= 0.25) throw DomainError("perturbation l1 norm must stay below 1/4");
  }
}

int representative(int k, int m) {
  int r = ((k % m) + m) % m;
  const int upper = (m + 1) / 2;  // ceil(m/2)
  return r < upper ? r : r - m;
}

Frequency reduce(const std::vector<int>& z, int m) {
  Frequency out(z.size());
  for (std::size_t i = 0; i < z.size(); ++i) out[i] = ((z[i] % m) + m) % m;
  return out;
}

Index lattice_index(const Frequency& w, int m) {
  Index idx = 0;
  for (std::size_t j = w.size(); j-- > 0;) idx = idx * m + w[j];
  return idx;
}

Frequency lattice_point(Index i, int d, int m) {
  Frequency w(d);
  for (int j = 0; j < d; ++j) {
    w[j] = static_cast<int>(i % m);
    i /= m;
  }
  return w;
}

std::vector<Frequency> all_frequencies(int d, int m) {
  std::vector<Frequency> out;
  const Index n = ipow(m, d);
  out.reserve(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) out.push_back(lattice_point(i, d, m));
  return out;
}

CMatrix weyl(const FuzzyTorusSpec& spec, const Frequency& z) {
  check_frequency(spec, z);
  const Index n = spec.lattice_size();
  CMatrix W = CMatrix::Zero(n, n);
  for (Index i = 0; i < n; ++i) {
    const Frequency w = lattice_point(i, spec.d, spec.m);
    Frequency src(spec.d);
    for (int j = 0; j < spec.d; ++j) src[j] = ((w[j] - z[j]) % spec.m + spec.m) % spec.m;
    W(i, lattice_index(src, spec.m)) = sigma(spec, w, z);
  }
  return W;
}

cplx commutation_phase(const FuzzyTorusSpec& spec, const Frequency& z, const Frequency& w) {
  return sigma(spec, w, z) / sigma(spec, z, w);
}

HermMatrix derivation(const FuzzyTorusSpec& spec, int j) {
  if (j < 0 || j >= spec.d) throw DomainError("derivation index out of range");
  const Index n = spec.lattice_size();
  RVector diag(n);
  for (Index i = 0; i < n; ++i) diag(i) = representative(lattice_point(i, spec.d, spec.m)[j], spec.m);
  return HermMatrix::diagonal(diag);
}

WindowCheck derivation_check(const FuzzyTorusSpec& spec, int j, const Frequency& z) {
  const CMatrix W = weyl(spec, z);
  const CMatrix residual = commutator(derivation(spec, j).mat(), W) - double(representative(z[j], spec.m)) * W;
  const Index n = spec.lattice_size();
  WindowCheck out;
  CMatrix wrapped = CMatrix::Zero(n, n);
  for (Index r = 0; r < n; ++r)
    for (Index c = 0; c < n; ++c) {
      if (W(r, c) == cplx(0.0)) {
        out.interior_error = std::max(out.interior_error, std::abs(residual(r, c)));
        continue;
      }
      const int wj = representative(lattice_point(r, spec.d, spec.m)[j], spec.m);
      const int shifted = wj - representative(z[j], spec.m);
      if (representative(shifted, spec.m) == shifted) {
        out.interior_error = std::max(out.interior_error, std::abs(residual(r, c)));
      } else {
        out.wraps = true;
        wrapped(r, c) = residual(r, c);
      }
    }
  out.wrap_defect = out.wraps ? op_norm(wrapped) : 0.0;
  return out;
}

GammaSet gammas(int d) {
  if (d < 1) throw DomainError("gamma matrices need d >= 1");
  const int k = spinor_qubits(d);
  const CMatrix id2 = CMatrix::Identity(2, 2);
  auto string_of = [&](int pos, const CMatrix& op) {
    CMatrix out = CMatrix::Identity(1, 1);
    for (int q = 0; q < k; ++q) out = kron(out, q < pos ? pauli(3) : (q == pos ? op : id2));
    return out;
  };
  GammaSet g;
  for (int j = 0; j < d; ++j) {
    const int pos = j / 2;
    if (pos < k)
      g.gammas.push_back(string_of(pos, pauli(1 + j % 2)));
    else
      g.gammas.push_back(string_of(k, id2));  // chirality: sigma_3 on every qubit
  }
  const Index s = g.size();
  const CMatrix I = CMatrix::Identity(s, s);
  for (int a = 0; a < d; ++a) {
    const CMatrix& ga = g.gammas[a];
    g.residual = std::max({g.residual, hermitian_defect(ga), op_norm(ga * ga.adjoint() - I)});
    for (int b = 0; b < d; ++b) {
      const CMatrix ac = ga * g.gammas[b] + g.gammas[b] * ga - (a == b ? 2.0 : 0.0) * I;
      g.residual = std::max(g.residual, op_norm(ac));
    }
  }
  return g;
}

CMatrix represent(const FuzzyTorusSpec& spec, const WeylSeries& f) { return spin_lift(spec, lattice_rep(spec, f)); }

CMatrix represent_hermitian(const FuzzyTorusSpec& spec, const WeylSeries& f) {
  const CMatrix a = represent(spec, f);
  return (a + a.adjoint()) / 2.0;
}

HermMatrix free_dirac(const FuzzyTorusSpec& spec) {
  const GammaSet g = gammas(spec.d);
  CMatrix D = CMatrix::Zero(spec.dim(), spec.dim());
  for (int j = 0; j < spec.d; ++j) D += kron(derivation(spec, j).mat(), g.gammas[j]);
  return HermMatrix(D);
}

HermMatrix dirac_operator(const FuzzyTorusSpec& spec) {
  HermMatrix D = free_dirac(spec);
  if (spec.perturbation.empty()) return D;
  const GammaSet g = gammas(spec.d);
  const Index s = spec.spinor_dim();
  CMatrix P = CMatrix::Zero(spec.dim(), spec.dim());
  for (int j = 0; j <= spec.d; ++j) {
    const CMatrix gamma = j == 0 ? CMatrix(CMatrix::Identity(s, s)) : g.gammas[j - 1];
    P += kron(lattice_rep(spec, spec.perturbation[j]), gamma);
  }
  return D + HermMatrix::symmetrized(P);
}

FiniteAlgebra torus_algebra(const FuzzyTorusSpec& spec) {
  std::vector<CMatrix> basis;
  for (const auto& z : all_frequencies(spec.d, spec.m)) basis.push_back(spin_lift(spec, weyl(spec, z)));
  return FiniteAlgebra::from_basis(spec.dim(), std::move(basis));
}

FiniteSpectralTriple dirac(const FuzzyTorusSpec& spec) {
  validate(spec, true);
  FiniteSpectralTriple t(torus_algebra(spec), dirac_operator(spec));
  const MetricReport rep = check_metric(t);
  if (!rep.passed()) {
    std::ostringstream msg;
    msg << "fuzzy torus triple (d=" << spec.d << ", m=" << spec.m << ") fails the metric check";
    for (const auto& s : rep.messages) msg << "; " << s;
    throw ValidationError(msg.str());
  }
  return t;
}

double lip_value(const FuzzyTorusSpec& spec, const CMatrix& a) {
  return op_norm(commutator(dirac_operator(spec).mat(), a));
}

namespace {

// Weyl coefficients of a on the spin-lifted basis; the basis is HS-orthogonal with norm^2 = dim.
std::vector<std::pair<Frequency, cplx>> weyl_coefficients(const FuzzyTorusSpec& spec, const CMatrix& a) {
  if (a.rows() != spec.dim() || a.cols() != spec.dim()) throw DomainError("element has wrong shape");
  std::vector<std::pair<Frequency, cplx>> out;
  const double norm2 = static_cast<double>(spec.dim());
  for (const auto& z : all_frequencies(spec.d, spec.m)) {
    const CMatrix w = spin_lift(spec, weyl(spec, z));
    const cplx c = (w.adjoint() * a).trace() / norm2;
    if (std::abs(c) > 0.0) out.emplace_back(z, c);
  }
  return out;
}

double action_phase(const FuzzyTorusSpec& spec, const RVector& g, const Frequency& z) {
  double p = 0.0;
  for (int j = 0; j < spec.d; ++j) p += g(j) * representative(z[j], spec.m);
  return 2.0 * kPi * p;
}

CMatrix rebuild(const FuzzyTorusSpec& spec, const std::vector<std::pair<Frequency, cplx>>& coeffs,
                const std::function<cplx(const Frequency&)>& factor) {
  CMatrix out = CMatrix::Zero(spec.dim(), spec.dim());
  for (const auto& [z, c] : coeffs) out += c * factor(z) * spin_lift(spec, weyl(spec, z));
  return out;
}

}  // namespace

CMatrix dual_action(const FuzzyTorusSpec& spec, const RVector& g, const CMatrix& a) {
  if (g.size() != spec.d) throw DomainError("torus point has wrong length");
  const auto coeffs = weyl_coefficients(spec, a);
  return rebuild(spec, coeffs, [&](const Frequency& z) { return std::polar(1.0, action_phase(spec, g, z)); });
}

double torus_length(const RVector& g) {
  double s = 0.0;
  for (Index i = 0; i < g.size(); ++i) {
    const double r = g(i) - std::floor(g(i) + 0.5);  // [-1/2, 1/2)
    s += r * r;
  }
  return std::sqrt(s);
}

double s_theta(const FuzzyTorusSpec& spec, const CMatrix& a, int resolution) {
  const int res = resolution > 0 ? resolution : spec.m;
  const auto coeffs = weyl_coefficients(spec, a);
  double best = 0.0;
  const Index points = ipow(res, spec.d);
  for (Index k = 1; k < points; ++k) {
    const Frequency idx = lattice_point(k, spec.d, res);
    RVector g(spec.d);
    for (int j = 0; j < spec.d; ++j) g(j) = static_cast<double>(idx[j]) / res;
    const CMatrix diff =
        rebuild(spec, coeffs, [&](const Frequency& z) { return 1.0 - std::polar(1.0, action_phase(spec, g, z)); });
    best = std::max(best, op_norm(diff) / torus_length(g));
  }
  return best;
}

KPrimeFit fit_kprime(const FuzzyTorusSpec& spec, const FiniteSpectralTriple& t, int samples, std::uint64_t seed) {
  KPrimeFit out;
  const auto& alg = t.algebra();
  for (int i = 0; i < samples; ++i) {
    Rng rng(seed, static_cast<std::uint64_t>(i));
    const HermMatrix a = alg.from_sa(gaussian_vector(rng, static_cast<Index>(alg.sa_basis().size())));
    const double l = lip(t, a);
    if (l < 1e-12) continue;
    out.max_ratio = std::max(out.max_ratio, s_theta(spec, a.mat()) / l);
    ++out.samples;
  }
  out.kprime = 1.1 * out.max_ratio;
  return out;
}

CMatrix bridge_x(const FuzzyTorusSpec& spec, double radius, double taper) {
  if (radius < 0.0) throw DomainError("bridge window is empty");
  if (taper < 0.0) throw DomainError("taper must be nonnegative");
  const Index n = spec.lattice_size();
  RVector weights(n);
  for (Index i = 0; i < n; ++i) {
    int top = 0;
    for (int v : lattice_point(i, spec.d, spec.m)) top = std::max(top, std::abs(representative(v, spec.m)));
    if (top <= radius)
      weights(i) = 1.0;
    else if (taper > 0.0)
      weights(i) = std::clamp((radius + taper - top) / taper, 0.0, 1.0);
    else
      weights(i) = 0.0;
  }
  return spin_lift(spec, weights.cast<cplx>().asDiagonal());
}

BridgeChoice choose_bridge(const FuzzyTorusSpec& spec, double eps) {
  if (!(eps > 0.0)) throw DomainError("bridge eps must be positive");
  const auto probes = low_frequency_probes(spec);
  const CMatrix D = dirac_operator(spec).mat();
  const int window = spec.m / 2;
  BridgeChoice out;
  for (int r = 0; r <= window; ++r) {
    const CMatrix x = bridge_x(spec, r);
    double worst = 0.0;
    for (const auto& a : probes) {
      const double l = op_norm(commutator(D, a));
      if (l > 1e-12) worst = std::max(worst, op_norm(commutator(x, a)) / l);
    }
    if (worst <= eps || r == window) {
      out.x = x;
      out.radius = r;
      out.worst_ratio = worst;
      out.full = r == window;
      return out;
    }
  }
  return out;
}

std::vector<TorusElement> default_test_elements(int d) {
  if (d < 2) throw DomainError("test elements need d >= 2");
  auto unit = [d](std::vector<std::pair<int, int>> entries) {
    Frequency z(d, 0);
    for (auto [j, v] : entries) z[j] = v;
    return z;
  };
  return {
      {"w10", {{unit({{0, 1}}), {1.0, 0.0}}}},
      {"w10_w01", {{unit({{0, 1}}), {1.0, 0.0}}, {unit({{1, 1}}), {0.5, 0.0}}}},
      {"w11_iw01", {{unit({{0, 1}, {1, 1}}), {1.0, 0.0}}, {unit({{1, 1}}), {0.0, 0.25}}}},
  };
}

RMatrix theta_matrix(int d, double value) {
  RMatrix t = RMatrix::Zero(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j) {
      t(i, j) = value;
      t(j, i) = -value;
    }
  return t;
}

FuzzyTorusSpec with_theta(FuzzyTorusSpec spec, double value) {
  spec.theta = theta_matrix(spec.d, value);
  return spec;
}

FuzzyTorusSpec with_scale(FuzzyTorusSpec spec, double scale, const FuzzyTorusSpec& base) {
  spec.perturbation = base.perturbation;
  for (auto& series : spec.perturbation)
    for (auto& term : series) term.coeff *= scale;
  return spec;
}

ContinuityReport continuity_experiment(const FuzzyTorusSpec& base, const ContinuityOptions& opt) {
  if (opt.theta_values.empty() || opt.t_scales.empty()) throw DomainError("continuity grids must be nonempty");
  if (!(opt.eps > 0.0)) throw DomainError("eps must be positive");
  ContinuityReport rep;
  const auto elements = opt.elements.empty() ? default_test_elements(base.d) : opt.elements;
  for (const auto& e : elements) rep.elements.push_back(e.name);

  const int nt = static_cast<int>(opt.theta_values.size()), ns = static_cast<int>(opt.t_scales.size());
  auto spec_at = [&](int i, int j) { return with_scale(with_theta(base, opt.theta_values[i]), opt.t_scales[j], base); };
  auto l_values = [&](const FuzzyTorusSpec& s) {
    const CMatrix D = dirac_operator(s).mat();
    std::vector<double> out;
    for (const auto& e : elements) out.push_back(op_norm(commutator(D, represent_hermitian(s, e.coeffs))));
    return out;
  };

  struct Pair {
    int ia, ja, ib, jb;
    const char* kind;
  };
  std::vector<Pair> pairs;
  if (nt == 1 && ns == 1) pairs.push_back({0, 0, 0, 0, "self"});
  for (int j = 0; j < ns; ++j)
    for (int i = 0; i + 1 < nt; ++i) pairs.push_back({i, j, i + 1, j, "theta"});
  for (int i = 0; i < nt; ++i)
    for (int j = 0; j + 1 < ns; ++j) pairs.push_back({i, j, i, j + 1, "t"});

  for (std::size_t k = 0; k < pairs.size(); ++k) {
    const Pair& p = pairs[k];
    ContinuityCell cell;
    cell.theta_id = p.ia;
    cell.t_id = p.ja;
    cell.kind = p.kind;
    cell.theta_a = opt.theta_values[p.ia];
    cell.theta_b = opt.theta_values[p.ib];
    cell.t_a = opt.t_scales[p.ja];
    cell.t_b = opt.t_scales[p.jb];
    cell.seed = mix_seed(opt.seed, k);
    try {
      const FuzzyTorusSpec sa = spec_at(p.ia, p.ja), sb = spec_at(p.ib, p.jb);
      validate(sa);
      validate(sb);
      cell.l_values = l_values(sa);
      const FiniteSpectralTriple ta = dirac(sa), tb = dirac(sb);
      PropinquityOptions po = opt.propinquity;
      po.magnitude.extent.seed = cell.seed;
      po.magnitude.reach.seed = mix_seed(cell.seed, 1);
      po.magnitude.extent.exec = po.magnitude.reach.exec = opt.exec;
      if (cell.kind == "theta") {
        const BridgeChoice bc = choose_bridge(sa, opt.eps);
        po.recipe = TunnelRecipe::Bridge;
        po.bridge_x = bc.x;
        po.bridge_eps = opt.eps;
      } else {
        po.recipe = TunnelRecipe::Auto;
      }
      const PropinquityBound b = spectral_propinquity_upper_bound(ta, tb, po);
      cell.bound = b.value;
      if (!b.evaluations.empty()) {
        auto it = std::find_if(b.evaluations.begin(), b.evaluations.end(),
                               [&](const Magnitude& m) { return m.eps == b.value; });
        const Magnitude& m = it != b.evaluations.end() ? *it : b.evaluations.back();
        cell.extent = std::max(m.extent, m.scalar_extent);
        cell.reach = m.reach;
        cell.magnitude = m.value;
      }
      cell.status = b.capped ? "capped" : "ok";
      for (const auto& msg : b.messages) cell.status += "; " + msg;
    } catch (const std::exception& e) {
      cell.status = std::string("rejected: ") + e.what();
      cell.bound = std::sqrt(2.0) / 2;
    }
    rep.cells.push_back(std::move(cell));
  }

  // finite differences of theta -> L(p) on successively halved steps
  for (int level = 0; level < opt.fd_levels; ++level) {
    const double h = opt.fd_step / std::pow(2.0, level);
    const int points = static_cast<int>(std::lround(opt.fd_span / h)) + 1;
    std::vector<FiniteDifferenceRow> rows(points);
    for (int k = 0; k < points; ++k) {
      FuzzyTorusSpec s = with_theta(base, opt.fd_origin + k * h);
      validate(s, false);
      rows[k].level = level;
      rows[k].step = h;
      rows[k].theta = opt.fd_origin + k * h;
      rows[k].interpolated = !s.admissible();
      rows[k].l_values = l_values(s);
    }
    double worst = 0.0;
    for (int k = 0; k + 1 < points; ++k)
      for (std::size_t e = 0; e < elements.size(); ++e) {
        const double diff = std::abs(rows[k + 1].l_values[e] - rows[k].l_values[e]);
        rows[k].diffs.push_back(diff);
        worst = std::max(worst, diff);
      }
    rep.level_max_diff.push_back(worst);
    rep.fd.insert(rep.fd.end(), rows.begin(), rows.end());
  }
  for (std::size_t l = 0; l + 1 < rep.level_max_diff.size(); ++l)
    rep.ratios.push_back(rep.level_max_diff[l + 1] > 0.0 ? rep.level_max_diff[l] / rep.level_max_diff[l + 1]
                                                         : std::numeric_limits<double>::infinity());
  return rep;
}

}  // namespace qmg::torus
