#pragma once

#include <cstdint>
#include <random>

#include "qmg/matrix.hpp"

namespace qmg {

// splitmix64 finalizer; used to derive independent per-sample streams.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}
  Rng(std::uint64_t seed, std::uint64_t stream) : eng_(mix_seed(seed, stream)) {}

  double normal() { return normal_(eng_); }
  double uniform() { return uniform_(eng_); }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(eng_); }
  cplx cnormal() { return {normal(), normal()}; }
  std::mt19937_64& engine() { return eng_; }

 private:
  std::mt19937_64 eng_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

RVector gaussian_vector(Rng& rng, Index n);
CVector complex_gaussian(Rng& rng, Index n);
CVector haar_vector(Rng& rng, Index n);
// Hilbert-Schmidt measure: G G^* / tr, G complex Ginibre.
HermMatrix hs_density(Rng& rng, Index n);
HermMatrix random_hermitian(Rng& rng, Index n);

}  // namespace qmg
