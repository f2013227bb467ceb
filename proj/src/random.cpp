#include "qmg/random.hpp"

namespace qmg {

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

RVector gaussian_vector(Rng& rng, Index n) {
  RVector v(n);
  for (Index k = 0; k < n; ++k) v(k) = rng.normal();
  return v;
}

CVector complex_gaussian(Rng& rng, Index n) {
  CVector v(n);
  for (Index k = 0; k < n; ++k) v(k) = rng.cnormal();
  return v;
}

CVector haar_vector(Rng& rng, Index n) {
  CVector v = complex_gaussian(rng, n);
  return v / v.norm();
}

HermMatrix hs_density(Rng& rng, Index n) {
  CMatrix g(n, n);
  for (Index j = 0; j < n; ++j)
    for (Index i = 0; i < n; ++i) g(i, j) = rng.cnormal();
  CMatrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  return HermMatrix::symmetrized(rho);
}

HermMatrix random_hermitian(Rng& rng, Index n) {
  CMatrix g(n, n);
  for (Index j = 0; j < n; ++j)
    for (Index i = 0; i < n; ++i) g(i, j) = rng.cnormal();
  return HermMatrix::symmetrized(g);
}

}  // namespace qmg
