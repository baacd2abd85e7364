#include <benchmark/benchmark.h>

#include "floquet_sb/kernels.hpp"
#include "floquet_sb/oracle.hpp"

using namespace floquet_sb;

namespace {

struct OracleFixture {
  DriveConfig drive = DriveConfig::from_ratio(1.0, 2.404826, 20.0);
  DiscreteBath bath{{{0.6, 0.152}, {1.1, 0.156}}};
  FockSpace fock{{8, 8}};
  CsrMatrix h;
  CMat block;

  OracleFixture() {
    h = SparseHamiltonian(Frame::rotating, drive, bath, fock).at(0.013);
    block = CMat::Random(fock.dim(), 81);
  }
};

const OracleFixture& oracle_fixture() {
  static const OracleFixture f;
  return f;
}

std::vector<double> time_points(int n) {
  std::vector<double> t(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) t[static_cast<std::size_t>(i)] = 50.0 * i / (n - 1);
  return t;
}

}  // namespace

static void BM_CsrApplySerial(benchmark::State& state) {
  const auto& f = oracle_fixture();
  CMat y;
  for (auto _ : state) {
    kernels::serial::csr_apply_block(f.h, f.block, y);
    benchmark::DoNotOptimize(y.data());
  }
}
BENCHMARK(BM_CsrApplySerial);

static void BM_CsrApplyParallel(benchmark::State& state) {
  const auto& f = oracle_fixture();
  CMat y;
  for (auto _ : state) {
    kernels::parallel::csr_apply_block(f.h, f.block, y);
    benchmark::DoNotOptimize(y.data());
  }
}
BENCHMARK(BM_CsrApplyParallel);

static void BM_SpectralGridSerial(benchmark::State& state) {
  const auto sd = SpectralDensity::ohmic(0.15, 0.9);
  const auto th = ThermalParams::at_beta(1.0);
  const auto times = time_points(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(kernels::serial::spectral_integrals_grid(sd, times, th));
}
BENCHMARK(BM_SpectralGridSerial)->Arg(64)->Unit(benchmark::kMillisecond);

static void BM_SpectralGridParallel(benchmark::State& state) {
  const auto sd = SpectralDensity::ohmic(0.15, 0.9);
  const auto th = ThermalParams::at_beta(1.0);
  const auto times = time_points(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(kernels::parallel::spectral_integrals_grid(sd, times, th));
}
BENCHMARK(BM_SpectralGridParallel)->Arg(64)->Unit(benchmark::kMillisecond);

static void BM_RhoGridSerial(benchmark::State& state) {
  const auto sd = SpectralDensity::ohmic(0.15, 0.9);
  const auto th = ThermalParams::at_beta(1.0);
  const ReducedDynamics dyn(DriveConfig::from_ratio(1.0, 3.83, 10.0), sd, th);
  const auto grid = kernels::serial::spectral_integrals_grid(sd, time_points(256), th);
  for (auto _ : state) benchmark::DoNotOptimize(kernels::serial::rho_s_grid(dyn, grid, QubitState::minus_y()));
}
BENCHMARK(BM_RhoGridSerial)->Unit(benchmark::kMillisecond);

static void BM_RhoGridParallel(benchmark::State& state) {
  const auto sd = SpectralDensity::ohmic(0.15, 0.9);
  const auto th = ThermalParams::at_beta(1.0);
  const ReducedDynamics dyn(DriveConfig::from_ratio(1.0, 3.83, 10.0), sd, th);
  const auto grid = kernels::serial::spectral_integrals_grid(sd, time_points(256), th);
  for (auto _ : state) benchmark::DoNotOptimize(kernels::parallel::rho_s_grid(dyn, grid, QubitState::minus_y()));
}
BENCHMARK(BM_RhoGridParallel)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
