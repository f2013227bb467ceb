#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qmg/exec.hpp"
#include "qmg/tunnel.hpp"

namespace qmg {

// ||xi|| + ||D xi|| on one module, or the coupled max-form on C^{N1} (+) C^{N2}:
// max{ D1(xi), D2(eta), constant * ||x (xi - eta)|| } (xi = eta forced for Equality).
struct DNorm {
  HermMatrix first;
  HermMatrix second;
  CouplingKind coupling = CouplingKind::Difference;
  double constant = 0.0;
  CMatrix x;

  static DNorm sum_form(HermMatrix d);
  bool coupled() const { return second.dim() > 0; }
  Index dim() const { return first.dim() + second.dim(); }
  double operator()(const CVector& v) const;
  // Same norm with the two components exchanged.
  DNorm swapped() const;
};

// sup { Re<v, z> : D(z) <= 1 }; eigen route for a single sum-form, cone program otherwise.
double dual_norm(const CVector& v, const DNorm& d, const conic::Options& opt = {});
double dual_norm_conic(const CVector& v, const DNorm& d, const conic::Options& opt = {});

// Hilbert module C^N over a commutative base C^k: <z, w>_i = <z, weights[i] w>.
struct MetrizedBundle {
  DNorm dnorm;
  std::vector<CMatrix> weights;
  SeminormSpec base;    // on diagonal C^k
  SeminormSpec acting;  // acting algebra on C^N
  double leibniz_constant = 1.0;
};

struct BundleReport {
  int samples = 0;
  double slack_a = 0.0;  // min of D(z) - ||z||
  double slack_c = 0.0;  // min of 2 D(z) D(w) - L_base(Re/Im <z,w>)
  double slack_d = 0.0;  // min of (||a|| + K L(a)) D(z) - D(a z)
  bool passed = false;
};

BundleReport check_bundle(const MetrizedBundle& b, int samples = 200, std::uint64_t seed = 5);
MetrizedBundle mvb(const FiniteSpectralTriple& t, int samples = 200, std::uint64_t seed = 5);

// k_D(phi.omega, psi.eta): base states are probability vectors on C^k.
double modular_mk(const MetrizedBundle& b, const RVector& phi, const CVector& omega, const RVector& psi,
                  const CVector& eta, const conic::Options& opt = {});

struct ModularTunnel {
  Tunnel base;    // algebra level
  Tunnel scalar;  // (C (+) C, Q)
  DNorm dnorm;    // on C^{N1} (+) C^{N2}, left first
  double leibniz_constant = 1.0;
  std::string recipe;
  std::vector<QuotientSample> lift_checks;
  double inner_product_slack = 0.0;
  BundleReport bundle_report;

  bool is_identity() const { return dnorm.coupling == CouplingKind::Equality; }
  ModularTunnel swapped() const;
  MetrizedBundle bundle() const;
  const HermMatrix& dirac(Side s) const { return s == Side::Left ? dnorm.first : dnorm.second; }
};

struct ModularOptions {
  TunnelOptions tunnel{};
  int lift_samples = 50;
  int bundle_samples = 200;
  PerturbationOptions perturbation{};
};

ModularTunnel modular_tunnel_identity(const FiniteSpectralTriple& t);
ModularTunnel modular_tunnel_perturbation(const FiniteSpectralTriple& t, const HermMatrix& T,
                                          const ModularOptions& opt = {});
ModularTunnel modular_tunnel_bridge(const FiniteSpectralTriple& t1, const FiniteSpectralTriple& t2,
                                    const CMatrix& x, double eps, const ModularOptions& opt = {});

// inf over eta of D'(omega (+) eta) with omega on side `s`.
double lift_quotient(const ModularTunnel& tun, Side s, const CVector& omega, const conic::Options& opt = {});
// Minimal lift: eta attaining lift_quotient, rescaled so D'(omega, eta) <= max(1, quotient).
CVector minimal_lift(const ModularTunnel& tun, Side s, const CVector& omega, const conic::Options& opt = {});

// Orient (source, target) as (first, second) of the coupled norm.
DNorm oriented_dnorm(const ModularTunnel& tun, Side source);

struct ReachOptions {
  int samples = 64;
  int rounds = 2;
  std::uint64_t seed = 202;
  Exec exec = Exec::Parallel;
  conic::Options solver{};
};

struct ReachSample {
  Side source = Side::Left;
  int index = 0;
  int round = 0;
  double value = 0.0;
  bool converged = true;
};

struct ReachEstimate {
  double value = 0.0;
  double direction[2] = {0.0, 0.0};
  std::vector<ReachSample> samples;
  int unconverged = 0;
};

// inf_eta sup_{D'(z) <= 1} |<z_s, omega> - <z_t, eta>| for one omega (exact via minimax).
struct ReachPoint {
  double value = 0.0;
  CVector zeta;  // oriented (source, target)
  bool converged = true;
};
ReachPoint reach_point(const ModularTunnel& tun, Side source, const CVector& omega,
                       const conic::Options& opt = {});

// Sampled sup over omega on the unit D-sphere, both directions.
ReachEstimate modular_reach(const ModularTunnel& tun, const ReachOptions& opt = {});

// Draw omega with D(omega) = 1.
CVector sample_unit_vector(const HermMatrix& dirac, std::uint64_t seed, std::uint64_t stream);

}  // namespace qmg
