#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qmg/matrix.hpp"

namespace qmg::conic {

enum class SetKind {
  SpectralBall,           // complex rows x cols matrix, operator norm <= 1
  HermitianSpectralBall,  // Hermitian part of a square matrix, operator norm <= 1
  EuclideanBall,          // ||v|| <= 1
  SecondOrderCone,        // v(0) >= ||v(1:)||
  Nonnegative,
  PsdCone,                // Hermitian square matrix >= 0
  Zero,
};

// A_j x + b_j in K_j. Matrix-valued sets use the layout of realify().
struct Block {
  SetKind kind = SetKind::Zero;
  Index rows = 0;
  Index cols = 0;
  RMatrix map;
  RVector offset;

  Index size() const { return map.rows(); }
};

struct Problem {
  RVector objective;  // maximize objective . x
  std::vector<Block> blocks;
};

struct Options {
  int max_iters = 20000;
  double eps_abs = 1e-9;
  double eps_rel = 1e-9;
  double rho = 1.0;
  double alpha = 1.6;
  int check_every = 10;
  double kernel_tol = 1e-9;
  double gap_tol = 1e-7;
  bool adaptive_rho = true;
};

struct Diagnostics {
  int iterations = 0;
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  std::optional<double> upper_bound;
  double gap = 0.0;
  bool converged = false;
  std::string status;
};

struct Result {
  RVector x;
  double value = 0.0;
  Diagnostics diag;
};

Block matrix_block(SetKind kind, Index rows, Index cols, RMatrix map, RVector offset = {});
Block vector_block(SetKind kind, RMatrix map, RVector offset = {});

// Euclidean projection of a single block value onto its set.
RVector project(const Block& block, const RVector& v);
// Gauge of the set at v for the bounded kinds (inf-like large value for Zero).
double gauge(const Block& block, const RVector& v);

// Throws UnboundedError if the objective has a component along the joint kernel of the maps.
Result maximize(const Problem& problem, const Options& options = {});

}  // namespace qmg::conic
