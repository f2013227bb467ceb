#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qmg/exec.hpp"
#include "qmg/kantorovich.hpp"
#include "qmg/triple.hpp"

namespace qmg {

enum class Side { Left = 0, Right = 1 };
inline Side other(Side s) { return s == Side::Left ? Side::Right : Side::Left; }

enum class CouplingKind {
  Difference,  // constant * ||a - b||
  Bridge,      // constant * ||a x - x b||, a on the side flagged x_multiplies_left
  Equality,    // a = b
};

struct Coupling {
  CouplingKind kind = CouplingKind::Equality;
  double constant = 0.0;
  CMatrix x;
  Side left_factor = Side::Left;  // side whose element multiplies x from the left
};

struct QuotientSample {
  Side side = Side::Left;
  double target = 0.0;    // side seminorm
  double quotient = 0.0;  // inf over lifts
  double rel_error = 0.0;
};

struct Tunnel {
  SeminormSpec left, right;  // each on its own algebra, self-adjoint basis
  Coupling coupling;
  std::optional<double> analytic_bound;
  std::string recipe;
  std::vector<QuotientSample> quotient_checks;

  const SeminormSpec& side(Side s) const { return s == Side::Left ? left : right; }
  Tunnel swapped() const;
  bool is_identity() const { return coupling.kind == CouplingKind::Equality; }

  // Seminorm on the direct sum with `first` in the leading block and coefficients.
  SeminormSpec oriented(Side first) const;
  double evaluate(const RVector& left_coeffs, const RVector& right_coeffs) const;
};

struct TunnelOptions {
  int quotient_samples = 50;
  double quotient_tol = 1e-3;
  std::uint64_t seed = 31;
  conic::Options solver{};
};

enum class CouplingRadius { Base, Perturbed };

struct PerturbationOptions {
  TunnelOptions tunnel{};
  CouplingRadius radius = CouplingRadius::Base;
  std::optional<double> diameter;  // skip the diameter search when known
  DiameterOptions diameter_opts{};
};

Tunnel identity_tunnel(const FiniteSpectralTriple& t);
Tunnel perturbation_tunnel(const FiniteSpectralTriple& t, const HermMatrix& T,
                           const PerturbationOptions& opt = {});
Tunnel bridge_tunnel(const FiniteSpectralTriple& t1, const FiniteSpectralTriple& t2, const CMatrix& x,
                     double eps, const TunnelOptions& opt = {});
// (C (+) C, c |z - w|); extent 1/c.
Tunnel scalar_tunnel(double c);

double perturbation_bound(double r, double t_norm);

// Runs the quotient check; fills tunnel.quotient_checks and throws ValidationError on failure.
void verify_quotients(Tunnel& tunnel, const TunnelOptions& opt);
double side_quotient(const Tunnel& tunnel, Side side, const RVector& coeffs, const conic::Options& opt = {});

struct ExtentSample {
  Side target = Side::Left;
  int index = 0;
  int round = 0;
  double weight = 0.0;  // mass on the target block
  double distance = 0.0;
  double witness_norm = 0.0;
  bool converged = true;
};

struct ExtentOptions {
  int outer = 64;
  int restarts = 8;
  int rounds = 3;
  std::uint64_t seed = 101;
  Exec exec = Exec::Parallel;
  conic::Options solver{};
};

struct ExtentEstimate {
  std::optional<double> analytic_bound;
  double value = 0.0;
  double direction[2] = {0.0, 0.0};
  std::vector<ExtentSample> samples;
  int unconverged = 0;
  ExtentOptions options;
};

// dist(mu, states pulled back from `target`) for a state mu on the oriented direct sum.
struct PullbackDistance {
  double value = 0.0;
  RVector witness;  // oriented coefficients
  bool converged = true;
};
PullbackDistance pullback_distance(const Tunnel& tunnel, Side target, const AlgState& mu,
                                   const conic::Options& opt = {});

ExtentEstimate extent_estimate(const Tunnel& tunnel, const ExtentOptions& opt = {});

}  // namespace qmg
