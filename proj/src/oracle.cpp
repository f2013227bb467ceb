#include "qmg/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "qmg/errors.hpp"
#include "qmg/random.hpp"

namespace qmg::oracle {
namespace {

// Ratio objective is scale invariant, so sampling directions is enough.
Estimate search(Index dim, const std::function<double(const RVector&)>& ratio, const Options& opt) {
  std::vector<double> vals(static_cast<std::size_t>(opt.samples));
  const auto draw = [&](int i) {
    Rng rng(opt.seed, static_cast<std::uint64_t>(i));
    return gaussian_vector(rng, dim);
  };
  if (opt.exec == Exec::Parallel) {
#pragma omp parallel for schedule(static)
    for (int i = 0; i < opt.samples; ++i) vals[i] = ratio(draw(i));
  } else {
    for (int i = 0; i < opt.samples; ++i) vals[i] = ratio(draw(i));
  }
  Estimate est;
  est.samples = opt.samples;
  if (opt.samples == 0) return est;
  const auto it = std::max_element(vals.begin(), vals.end());
  const int best = static_cast<int>(it - vals.begin());
  est.sampled = *it;
  RVector x = draw(best);
  double fx = *it;

  Rng rng(opt.seed, 0xfeedULL);
  double step = 0.1;
  for (int k = 0; k < opt.polish_steps && step > 1e-12; ++k) {
    const RVector y = x + step * x.norm() * gaussian_vector(rng, dim) / std::sqrt(double(dim));
    const double fy = ratio(y);
    if (fy > fx) {
      x = y;
      fx = fy;
      step *= 1.5;
    } else {
      step *= 0.9;
    }
  }
  est.value = fx;
  est.best = x;
  return est;
}

// Orthogonal projector onto the complement of ker L. Searching there keeps the polish from
// drifting toward the kernel, where rounding in g.c over a vanishing L dominates the ratio.
RMatrix kernel_complement(const SeminormSpec& spec) {
  Index rows = 0;
  for (const auto& t : spec.terms)
    if (!t.equality && !t.images.empty()) rows += 2 * t.images.front().size();
  RMatrix a = RMatrix::Zero(rows, spec.size());
  Index r0 = 0;
  for (const auto& t : spec.terms) {
    if (t.equality || t.images.empty()) continue;
    const Index len = t.images.front().size();
    for (Index k = 0; k < spec.size(); ++k) {
      const auto flat = t.images[static_cast<std::size_t>(k)].reshaped();
      a.col(k).segment(r0, len) = flat.real();
      a.col(k).segment(r0 + len, len) = flat.imag();
    }
    r0 += 2 * len;
  }
  const Eigen::JacobiSVD<RMatrix> svd(a, Eigen::ComputeFullV);
  const RVector& s = svd.singularValues();
  const double cut = 1e-10 * (s.size() ? s(0) : 0.0);
  Index rank = 0;
  while (rank < s.size() && s(rank) > cut) ++rank;
  const RMatrix v = svd.matrixV().leftCols(rank);
  return v * v.transpose();
}

}  // namespace

Estimate mk_distance(const SeminormSpec& spec, const AlgState& phi, const AlgState& psi,
                     const Options& opt) {
  const RVector g = state_gradient(spec, phi, psi);
  const RMatrix proj = kernel_complement(spec);
  auto ratio = [&](const RVector& raw) {
    const RVector c = proj * raw;
    const double l = spec.evaluate(c);
    if (!(l > 0.0) || !std::isfinite(l)) return 0.0;
    return std::abs(g.dot(c)) / l;
  };
  Estimate est = search(spec.size(), ratio, opt);
  if (est.best.size()) est.best = proj * est.best;
  return est;
}

Estimate dual_dnorm(const CVector& v, const HermMatrix& dirac, const Options& opt) {
  auto ratio = [&](const RVector& r) {
    const CVector x = unrealify(r);
    const double n = dnorm(dirac, x);
    return n > 0.0 ? v.dot(x).real() / n : 0.0;
  };
  return search(2 * v.size(), ratio, opt);
}

Estimate dual_norm(const CVector& v, const std::function<double(const CVector&)>& norm,
                   const Options& opt, const CMatrix& precond) {
  if (precond.size() && (precond.rows() != v.size() || precond.cols() != v.size()))
    throw DomainError("oracle dual norm: preconditioner has wrong shape");
  auto ratio = [&](const RVector& r) {
    const CVector x = precond.size() ? CVector(precond * unrealify(r)) : unrealify(r);
    const double n = norm(x);
    return n > 0.0 ? v.dot(x).real() / n : 0.0;
  };
  return search(2 * v.size(), ratio, opt);
}

}  // namespace qmg::oracle
