#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qmg/covariant.hpp"
#include "qmg/triple.hpp"

namespace qmg::torus {

// Element of (Z_m)^d, entries reduced to [0, m).
using Frequency = std::vector<int>;

struct WeylTerm {
  Frequency z;
  cplx coeff;
};
using WeylSeries = std::vector<WeylTerm>;

// Fuzzy torus C*((Z_m)^d, sigma_Theta) with an optional perturbation (t_0, ..., t_d).
struct FuzzyTorusSpec {
  int d = 2;
  int m = 3;
  RMatrix theta;                        // skew, entries in (1/m) Z when admissible
  std::vector<WeylSeries> perturbation;  // empty or d + 1 series

  static FuzzyTorusSpec flat(int d, int m);
  Index lattice_size() const;  // m^d
  Index spinor_dim() const;
  Index dim() const { return lattice_size() * spinor_dim(); }
  double perturbation_l1() const;
  bool admissible(double tol = 1e-12) const;
};

// Throws DomainError. Off-grid Theta is allowed only when require_admissible is false
// (interpolated cocycle, used by the finite-difference scan).
void validate(const FuzzyTorusSpec& spec, bool require_admissible = true);

// Symmetric window representative of k mod m in [-floor(m/2), ceil(m/2)).
int representative(int k, int m);
Frequency reduce(const std::vector<int>& z, int m);
Index lattice_index(const Frequency& w, int m);
Frequency lattice_point(Index i, int d, int m);
std::vector<Frequency> all_frequencies(int d, int m);

// (W_z xi)(w) = sigma(w, z) xi(w - z) on l^2((Z_m)^d).
CMatrix weyl(const FuzzyTorusSpec& spec, const Frequency& z);
// W_z W_w = phase * W_w W_z for admissible Theta.
cplx commutation_phase(const FuzzyTorusSpec& spec, const Frequency& z, const Frequency& w);

HermMatrix derivation(const FuzzyTorusSpec& spec, int j);  // j in [0, d)

// [d_j, W_z] against rep(z_j) W_z: exact on entries whose shift stays in the window,
// the rest is the wrap defect.
struct WindowCheck {
  double interior_error = 0.0;
  double wrap_defect = 0.0;
  bool wraps = false;
};
WindowCheck derivation_check(const FuzzyTorusSpec& spec, int j, const Frequency& z);

struct GammaSet {
  std::vector<CMatrix> gammas;
  double residual = 0.0;  // max anticommutator / Hermitian / unitary defect
  Index size() const { return gammas.empty() ? 0 : gammas.front().rows(); }
};
GammaSet gammas(int d);

// pi(f) (x) I on l^2 (x) spinors.
CMatrix represent(const FuzzyTorusSpec& spec, const WeylSeries& f);
CMatrix represent_hermitian(const FuzzyTorusSpec& spec, const WeylSeries& f);  // (pi(f) + pi(f)^*) / 2

HermMatrix free_dirac(const FuzzyTorusSpec& spec);
// Free part plus the Hermitian part of sum_j pi(t_j) (x) gamma_j, gamma_0 = I.
HermMatrix dirac_operator(const FuzzyTorusSpec& spec);
FiniteAlgebra torus_algebra(const FuzzyTorusSpec& spec);
// Metric triple over the fuzzy torus; ValidationError if the metric check fails.
FiniteSpectralTriple dirac(const FuzzyTorusSpec& spec);
// ||[D, a]|| straight from matrices, no algebra membership needed.
double lip_value(const FuzzyTorusSpec& spec, const CMatrix& a);

// alpha^g on an element of the algebra: W_z -> exp(2 pi i g.z) W_z.
CMatrix dual_action(const FuzzyTorusSpec& spec, const RVector& g, const CMatrix& a);
double torus_length(const RVector& g);  // Euclidean, fundamental domain [-1/2, 1/2)^d
// max over the torus grid (resolution^d points, identity excluded) of ||a - alpha^g a|| / l(g).
double s_theta(const FuzzyTorusSpec& spec, const CMatrix& a, int resolution = 0);

struct KPrimeFit {
  double max_ratio = 0.0;
  double kprime = 0.0;  // max_ratio plus a 10% margin
  int samples = 0;
};
KPrimeFit fit_kprime(const FuzzyTorusSpec& spec, const FiniteSpectralTriple& t, int samples = 64,
                     std::uint64_t seed = 61);

// Projection onto the lattice window max_j |rep(w_j)| <= radius, optional linear taper.
CMatrix bridge_x(const FuzzyTorusSpec& spec, double radius, double taper = 0.0);

struct BridgeChoice {
  CMatrix x;
  double radius = 0.0;
  double worst_ratio = 0.0;  // max ||[x, a]|| / L(a) on the low-frequency set
  bool full = false;         // fell back to x = I
};
// Smallest window whose commutators stay below eps * L on the low-frequency set.
BridgeChoice choose_bridge(const FuzzyTorusSpec& spec, double eps);

struct TorusElement {
  std::string name;
  WeylSeries coeffs;
};
std::vector<TorusElement> default_test_elements(int d);

// Theta = value * (upper-triangular ones, skew-completed).
RMatrix theta_matrix(int d, double value);
FuzzyTorusSpec with_theta(FuzzyTorusSpec spec, double value);
FuzzyTorusSpec with_scale(FuzzyTorusSpec spec, double scale, const FuzzyTorusSpec& base);

struct ContinuityOptions {
  std::vector<double> theta_values;  // admissible values, multiples of 1/m
  std::vector<double> t_scales{1.0};
  double eps = 0.2;
  PropinquityOptions propinquity{};
  std::vector<TorusElement> elements;  // empty: default_test_elements
  int fd_levels = 4;
  double fd_step = 0.04;
  double fd_span = 0.16;
  double fd_origin = 0.0;
  std::uint64_t seed = 71;
  Exec exec = Exec::Parallel;
};

struct ContinuityCell {
  int theta_id = 0;
  int t_id = 0;
  std::string kind;  // "theta", "t", or "self"
  double theta_a = 0.0, theta_b = 0.0, t_a = 0.0, t_b = 0.0;
  double bound = 0.0;
  double extent = 0.0;
  double reach = 0.0;
  double magnitude = 0.0;
  std::vector<double> l_values;  // L(p) at the first grid point of the pair
  std::string status;
  std::uint64_t seed = 0;
};

struct FiniteDifferenceRow {
  int level = 0;
  double step = 0.0;
  double theta = 0.0;
  std::vector<double> l_values;
  std::vector<double> diffs;  // |L(theta + step) - L(theta)|, empty on the last point
  bool interpolated = false;
};

struct ContinuityReport {
  std::vector<ContinuityCell> cells;
  std::vector<FiniteDifferenceRow> fd;
  std::vector<double> level_max_diff;
  std::vector<double> ratios;  // consecutive level_max_diff ratios
  std::vector<std::string> elements;
};

ContinuityReport continuity_experiment(const FuzzyTorusSpec& base, const ContinuityOptions& opt);

}  // namespace qmg::torus
