#pragma once

#include "qmg/triple.hpp"

namespace fx {

// Two points at distance d: C^2 diagonal with D = sigma_x / d.
inline qmg::FiniteSpectralTriple two_point(double d) {
  return {qmg::FiniteAlgebra::diagonal(2), qmg::HermMatrix(qmg::CMatrix(qmg::pauli(1) / d))};
}

// Path graph on n vertices, edge weights w_k between k and k+1.
inline qmg::FiniteSpectralTriple path(const std::vector<double>& w) {
  const auto n = static_cast<qmg::Index>(w.size() + 1);
  qmg::CMatrix d = qmg::CMatrix::Zero(n, n);
  for (qmg::Index k = 0; k + 1 < n; ++k) d(k, k + 1) = d(k + 1, k) = w[k];
  return {qmg::FiniteAlgebra::diagonal(n), qmg::HermMatrix(d)};
}

}  // namespace fx
