#include <benchmark/benchmark.h>

#include "isopar/classifier.hpp"
#include "isopar/geometry.hpp"
#include "isopar/oracle.hpp"
#include "isopar/orbits.hpp"

using namespace isopar;

static void BM_BuildClifford(benchmark::State& st) {
  const int m = static_cast<int>(st.range(0)), k = static_cast<int>(st.range(1));
  for (auto _ : st) benchmark::DoNotOptimize(build_clifford_system(m, k));
}
BENCHMARK(BM_BuildClifford)->Args({4, 2})->Args({8, 3})->Args({12, 1});

static void BM_SampleM1(benchmark::State& st) {
  const CliffordSystem sys = build_clifford_system(static_cast<int>(st.range(0)), 1);
  std::uint64_t seed = 0;
  for (auto _ : st) benchmark::DoNotOptimize(sample_M1(sys, seed++));
}
BENCHMARK(BM_SampleM1)->Arg(5)->Arg(9)->Arg(12);

static void BM_SampleM2(benchmark::State& st) {
  const CliffordSystem sys = build_clifford_system(static_cast<int>(st.range(0)), 1);
  std::uint64_t seed = 0;
  for (auto _ : st) benchmark::DoNotOptimize(sample_M2(sys, seed++));
}
BENCHMARK(BM_SampleM2)->Arg(5)->Arg(9)->Arg(12);

// closed-form derivative of the Ricci tensor along one direction
static void BM_NablaRicciM1(benchmark::State& st) {
  const CliffordSystem sys = build_clifford_system(static_cast<int>(st.range(0)), 1);
  const TangentFrame f = frame_M1(sys, sample_M1(sys, 1));
  const FkmM1Curvature c(sys, f);
  Rng rng(2);
  const Vector z = random_unit(c.dim(), rng);
  for (auto _ : st) benchmark::DoNotOptimize(c.nabla_ricci(z));
}
BENCHMARK(BM_NablaRicciM1)->Arg(5)->Arg(9)->Arg(12);

static void BM_NablaRicciM2(benchmark::State& st) {
  const CliffordSystem sys = build_clifford_system(static_cast<int>(st.range(0)), 1);
  const TangentFrame f = frame_M2(sys, sample_M2(sys, 1));
  const FkmM2Curvature c(sys, f);
  Rng rng(2);
  const Vector z = random_unit(c.dim(), rng);
  for (auto _ : st) benchmark::DoNotOptimize(c.nabla_ricci(z));
}
BENCHMARK(BM_NablaRicciM2)->Arg(5)->Arg(9)->Arg(12);

static void BM_OracleNablaRicci(benchmark::State& st) {
  const CliffordSystem sys = build_clifford_system(static_cast<int>(st.range(0)), 1);
  const FocalPoint p = sample_M1(sys, 1);
  const NumericCurvature num(std::make_shared<FkmM1Chart>(sys), p.x, frame_M1(sys, p).tangent);
  Rng rng(2);
  const Vector z = random_unit(num.dim(), rng);
  for (auto _ : st) benchmark::DoNotOptimize(num.nabla_ricci(z));
}
BENCHMARK(BM_OracleNablaRicci)->Arg(5)->Arg(9)->Unit(benchmark::kMillisecond);

static void BM_CyclicDefect(benchmark::State& st) {
  const CliffordSystem sys = build_clifford_system(static_cast<int>(st.range(0)), 1);
  const TangentFrame f = frame_M1(sys, sample_M1(sys, 1));
  const FkmM1Curvature c(sys, f);
  for (auto _ : st) benchmark::DoNotOptimize(cyclic_parallel_defect(c, 200, 3));
}
BENCHMARK(BM_CyclicDefect)->Arg(5)->Arg(9)->Unit(benchmark::kMillisecond);

static void BM_BuildOrbit(benchmark::State& st) {
  const OrbitCase c = all_orbit_cases()[static_cast<std::size_t>(st.range(0))];
  for (auto _ : st) benchmark::DoNotOptimize(build_orbit(c));
}
BENCHMARK(BM_BuildOrbit)->DenseRange(0, 3);

static void BM_RunCase(benchmark::State& st) {
  CaseSpec s = CaseSpec::parse(st.range(0) == 0 ? "otfkm:4:2:definite:M1" : "homogeneous:u5_M2_13");
  s.oracle_directions = 0;
  for (auto _ : st) benchmark::DoNotOptimize(run_case(s));
}
BENCHMARK(BM_RunCase)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
