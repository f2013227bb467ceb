#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qmg/exec.hpp"
#include "qmg/modular.hpp"

namespace qmg {

using MonoidElem = long long;

// Discretized proper monoid. Elements are integers: grid index for the reals,
// residue for cyclic groups, always 0 for the trivial monoid.
class ProperMonoidGrid {
 public:
  enum class Kind { Reals, Cyclic, Trivial };

  static ProperMonoidGrid reals(double step, double cap);
  static ProperMonoidGrid cyclic(int order, double unit = 1.0);
  static ProperMonoidGrid trivial();

  Kind kind() const { return kind_; }
  double step() const { return step_; }
  double cap() const { return cap_; }
  int order() const { return order_; }

  MonoidElem identity() const { return 0; }
  MonoidElem op(MonoidElem a, MonoidElem b) const;
  double distance(MonoidElem a, MonoidElem b) const;
  double value(MonoidElem a) const;  // coordinate on the line (reals), else index * unit
  // Closed ball of radius r around the identity, truncated at the cap.
  std::vector<MonoidElem> ball(double r) const;
  bool truncated(double r) const { return kind_ == Kind::Reals && r > cap_; }
  std::string describe() const;

 private:
  Kind kind_ = Kind::Trivial;
  double step_ = 1.0;
  double cap_ = 0.0;
  int order_ = 1;
};

struct MonoidMap {
  std::map<MonoidElem, MonoidElem> table;
  std::optional<MonoidElem> at(MonoidElem g) const;
};

// Pair (forward: G1 -> G2, backward: G2 -> G1) declared r-local eps-almost isometric.
struct AlmostIsometryPair {
  MonoidMap forward;
  MonoidMap backward;
  double radius = 0.0;
  double eps = 0.0;
};

struct AlmostIsometryReport {
  bool passed = false;
  double worst = 0.0;  // largest defect, unit condition included
  double unit_defect = 0.0;
  int worst_direction = 0;  // 0: forward maps, 1: backward maps
  MonoidElem worst_g = 0, worst_g2 = 0, worst_h = 0;
  long long checked = 0;
};

AlmostIsometryPair tabulate_pair(const std::function<MonoidElem(MonoidElem)>& forward,
                                 const std::function<MonoidElem(MonoidElem)>& backward,
                                 const ProperMonoidGrid& g1, const ProperMonoidGrid& g2, double radius, double eps);
AlmostIsometryPair identity_pair(const ProperMonoidGrid& g, double radius, double eps);

// Exhaustive over the declared balls; throws DomainError when a map misses a ball element.
AlmostIsometryReport verify_almost_isometry(const AlmostIsometryPair& p, const ProperMonoidGrid& g1,
                                            const ProperMonoidGrid& g2, Exec exec = Exec::Parallel);

// (q.fwd o p.fwd, p.bwd o q.bwd) at (1/(e1+e2), e1+e2), re-verified before returning.
// Throws DomainError on the eps range and ContractViolation if the result fails verification.
AlmostIsometryPair compose_almost_isometries(const AlmostIsometryPair& p, const AlmostIsometryPair& q,
                                             const ProperMonoidGrid& g1, const ProperMonoidGrid& g3);

// Identity plus bounded integer jitter on a reals grid; valid at (1/eps, eps) by construction.
AlmostIsometryPair random_perturbed_identity(const ProperMonoidGrid& g, double eps, std::uint64_t seed);

struct UpsilonBound {
  double value = 0.0;
  bool capped = false;
  bool no_candidates = false;
  int best_candidate = -1;
};

// Smallest grid eps at which some candidate lies in UIso(eps, 1/eps), capped at sqrt(2)/2.
UpsilonBound upsilon_upper_bound(const ProperMonoidGrid& g, const ProperMonoidGrid& h,
                                 const std::vector<AlmostIsometryPair>& candidates,
                                 const std::vector<double>& eps_grid);

// ||(e^{itD} - e^{it(D+T)}) xi|| <= |t| ||T|| for D-unit xi (half the samples use D+T).
struct KatoReport {
  double worst_slack = 0.0;
  double worst_t = 0.0;
  long long pairs = 0;
  bool passed = false;
};
KatoReport kato_check(const HermMatrix& dirac, const HermMatrix& perturbation, const std::vector<double>& times,
                      int vectors = 100, std::uint64_t seed = 41, Exec exec = Exec::Parallel);

std::vector<double> uniform_times(double half_width, int points);

struct CovariantReachOptions {
  int samples = 8;
  std::uint64_t seed = 303;
  Exec exec = Exec::Parallel;
  conic::Options solver{};
};

struct CovariantReach {
  double value = 0.0;
  double direction[2] = {0.0, 0.0};
  double worst_time = 0.0;
  long long evaluations = 0;
  bool exact_inner = false;  // grid {0}: delegated to the modular reach
};

// Sampled sup over D-unit omega, min over explicit partners eta, max over the time grid of the
// module distance between the two translated states. Both sides flow by exp(itD_side).
CovariantReach covariant_reach(const ModularTunnel& tun, const std::vector<double>& times,
                               const CovariantReachOptions& opt = {});

struct MagnitudeOptions {
  ExtentOptions extent{};
  CovariantReachOptions reach{};
  double time_step = 0.5;  // grid step on the line, ball radius 1/eps
};

struct Magnitude {
  double eps = 0.0;
  double extent = 0.0;         // algebra-level tunnel
  double scalar_extent = 0.0;  // (C (+) C, Q) tunnel, 1/c
  double reach = 0.0;          // modular covariant reach
  double value = 0.0;
  int time_points = 0;
};

// Extent terms do not depend on eps; pass a cached estimate to skip recomputation.
Magnitude magnitude(const ModularTunnel& tun, double eps, const MagnitudeOptions& opt = {},
                    std::optional<double> cached_extent = std::nullopt);

enum class TunnelRecipe { Auto, Identity, Perturbation, Bridge };

struct PropinquityOptions {
  TunnelRecipe recipe = TunnelRecipe::Auto;
  std::vector<double> eps_grid;  // empty: 0.01 .. 0.70 in steps of 0.01
  CMatrix bridge_x;
  double bridge_eps = 0.1;
  ModularOptions modular{};
  MagnitudeOptions magnitude{};
};

struct PropinquityBound {
  double value = 0.0;
  bool capped = false;
  TunnelRecipe recipe = TunnelRecipe::Auto;
  std::vector<Magnitude> evaluations;
  std::vector<std::string> messages;
};

PropinquityBound spectral_propinquity_upper_bound(const FiniteSpectralTriple& t1, const FiniteSpectralTriple& t2,
                                                  const PropinquityOptions& opt = {});

std::string to_string(TunnelRecipe r);

}  // namespace qmg
