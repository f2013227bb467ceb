#include "qmg/errors.hpp"
#include "qmg/kantorovich.hpp"
#include "qmg/random.hpp"
#include "qmg/triple.hpp"

namespace qmg {

DiameterResult diameter(const FiniteSpectralTriple& t, const DiameterOptions& opt) {
  const auto spec = lip_seminorm(t);
  const Index N = t.dim();
  DiameterResult out;
  for (int r = 0; r < opt.restarts; ++r) {
    Rng rng(opt.seed, static_cast<std::uint64_t>(r));
    AlgState phi = r == 0 ? basis_state(N, 0) : pure_state(haar_vector(rng, N));
    AlgState psi = r == 0 ? basis_state(N, N - 1) : pure_state(haar_vector(rng, N));
    double last = -1.0;
    for (int round = 0; round < opt.rounds; ++round) {
      const auto mk = mk_distance(spec, phi, psi);
      ++out.solves;
      const HermMatrix a = spec.element(mk.witness);
      const auto eig = herm_eig(a);
      const double spread = eig.values(N - 1) - eig.values(0);
      if (spread > out.value) {
        out.value = spread;
        out.witness = a;
      }
      out.best_mk = std::max(out.best_mk, mk.value);
      // extreme eigenvectors of the witness are the best pure pair for it
      phi = pure_state(eig.vectors.col(N - 1));
      psi = pure_state(eig.vectors.col(0));
      if (mk.value <= last + 1e-10) break;
      last = mk.value;
    }
  }
  return out;
}

}  // namespace qmg
