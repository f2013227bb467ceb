#include "qmg/triple.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "qmg/errors.hpp"
#include "qmg/random.hpp"

namespace qmg {

FiniteSpectralTriple::FiniteSpectralTriple(FiniteAlgebra algebra, HermMatrix dirac)
    : alg_(std::move(algebra)), dirac_(std::move(dirac)) {
  if (dirac_.dim() != alg_.ambient_dim())
    throw DomainError("FiniteSpectralTriple: Dirac operator and algebra act on different spaces");
}

double lip_unchecked(const HermMatrix& dirac, const CMatrix& a) {
  return op_norm(commutator(dirac.mat(), a));
}

double lip(const FiniteSpectralTriple& t, const HermMatrix& a) {
  if (a.dim() != t.dim()) throw DomainError("lip: dimension mismatch");
  if (!t.algebra().contains(a.mat())) throw DomainError("lip: element is not in the algebra");
  const cplx i{0.0, 1.0};
  return op_norm(HermMatrix::symmetrized(i * commutator(t.dirac().mat(), a.mat())));
}

double dnorm(const HermMatrix& dirac, const CVector& xi) {
  if (xi.size() != dirac.dim()) throw DomainError("dnorm: dimension mismatch");
  return xi.norm() + (dirac.mat() * xi).norm();
}

MetricReport check_metric(const FiniteSpectralTriple& t, int leibniz_samples, std::uint64_t seed) {
  MetricReport rep;
  const auto& sa = t.algebra().sa_basis();
  const Index n = static_cast<Index>(sa.size());
  const Index N = t.dim();
  const cplx i{0.0, 1.0};
  RMatrix M(2 * N * N, n);
  for (Index k = 0; k < n; ++k) M.col(k) = realify(CMatrix(i * commutator(t.dirac().mat(), sa[k].mat())));
  Eigen::JacobiSVD<RMatrix> svd(M);
  RVector s = svd.singularValues().reverse();
  rep.singular_values = s;
  const double smax = s.size() ? s(s.size() - 1) : 0.0;
  if (smax <= 0.0) {
    rep.messages.push_back("commutator map is zero");
    rep.kernel_dim = n;
  } else {
    for (Index k = 0; k < n; ++k)
      if (s(k) <= 1e-8 * smax) ++rep.kernel_dim;
    rep.gap_ratio = n > 1 ? s(1) / smax : 0.0;
    // identity is always in the kernel; metric iff nothing else is
    rep.metric = rep.kernel_dim == 1;
    if (!rep.metric)
      rep.messages.push_back("kernel of a -> [D,a] has dimension " + std::to_string(rep.kernel_dim));
  }

  Rng rng(seed);
  rep.leibniz = true;
  rep.worst_leibniz_slack = std::numeric_limits<double>::infinity();
  for (int s_ = 0; s_ < leibniz_samples; ++s_) {
    const HermMatrix a = t.algebra().from_sa(gaussian_vector(rng, n));
    const HermMatrix b = t.algebra().from_sa(gaussian_vector(rng, n));
    const CMatrix ab = a.mat() * b.mat();
    const double la = lip(t, a), lb = lip(t, b);
    const double jordan = lip_unchecked(t.dirac(), CMatrix(0.5 * (ab + ab.adjoint())));
    const double lie = lip_unchecked(t.dirac(), CMatrix((ab - ab.adjoint()) / (2.0 * i)));
    const double bound = op_norm(a) * lb + la * op_norm(b);
    const double slack = bound - std::max(jordan, lie);
    rep.worst_leibniz_slack = std::min(rep.worst_leibniz_slack, slack);
    if (slack < -1e-9 * (1.0 + bound)) rep.leibniz = false;
  }
  if (!rep.leibniz) rep.messages.push_back("Leibniz inequality violated on a sample");
  return rep;
}

}  // namespace qmg
