// Serial reference vs OpenMP path for the sampling kernels. Arg 0 = serial, 1 = parallel.
#include <benchmark/benchmark.h>

#include "qmg/covariant.hpp"
#include "qmg/oracle.hpp"
#include "qmg/random.hpp"
#include "qmg/tunnel.hpp"

using namespace qmg;

namespace {

Exec mode(const benchmark::State& s) { return s.range(0) ? Exec::Parallel : Exec::Serial; }

FiniteSpectralTriple path4() {
  CMatrix d = CMatrix::Zero(4, 4);
  const double w[] = {1.0, 0.7, 1.3};
  for (Index k = 0; k < 3; ++k) d(k, k + 1) = d(k + 1, k) = w[k];
  return {FiniteAlgebra::diagonal(4), HermMatrix(d)};
}

void BM_OracleDistance(benchmark::State& s) {
  const auto t = path4();
  const SeminormSpec spec = lip_seminorm(t);
  oracle::Options o;
  o.samples = 20000;
  o.exec = mode(s);
  for (auto _ : s) benchmark::DoNotOptimize(oracle::mk_distance(spec, basis_state(4, 0), basis_state(4, 3), o).value);
}

void BM_ExtentEstimate(benchmark::State& s) {
  const auto t = path4();
  Rng rng(3);
  HermMatrix T = random_hermitian(rng, 4);
  T = T * (0.02 / op_norm(T));
  const Tunnel tun = perturbation_tunnel(t, T);
  ExtentOptions eo;
  eo.outer = 8;
  eo.restarts = 2;
  eo.rounds = 1;
  eo.exec = mode(s);
  for (auto _ : s) benchmark::DoNotOptimize(extent_estimate(tun, eo).value);
}

void BM_Kato(benchmark::State& s) {
  const auto t = path4();
  Rng rng(5);
  HermMatrix T = random_hermitian(rng, 4);
  T = T * (0.1 / op_norm(T));
  const auto times = uniform_times(5.0, 100);
  for (auto _ : s) benchmark::DoNotOptimize(kato_check(t.dirac(), T, times, 100, 41, mode(s)).worst_slack);
}

void BM_VerifyAlmostIsometry(benchmark::State& s) {
  const auto g = ProperMonoidGrid::reals(0.02, 50.0);
  const auto p = random_perturbed_identity(g, 0.3, 9);
  for (auto _ : s) benchmark::DoNotOptimize(verify_almost_isometry(p, g, g, mode(s)).worst);
}

}  // namespace

BENCHMARK(BM_OracleDistance)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ExtentEstimate)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Kato)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_VerifyAlmostIsometry)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
