#include <benchmark/benchmark.h>

#include "epchiral/averaging.hpp"
#include "epchiral/loop.hpp"
#include "epchiral/model.hpp"

namespace {

void BM_Eigensystem(benchmark::State& state) {
  const auto p = epchiral::make_params(4.0, 1.0, 0.3, -0.2);
  for (auto _ : state) benchmark::DoNotOptimize(epchiral::eigensystem(p));
}
BENCHMARK(BM_Eigensystem);

void BM_Discriminant(benchmark::State& state) {
  const auto p = epchiral::make_params(1.5e-4, 8.8e-5, -1.1e-4, -1.6e-5);
  for (auto _ : state) benchmark::DoNotOptimize(epchiral::discriminant(p));
}
BENCHMARK(BM_Discriminant);

// One loop at the default widths; range is the loop time in a.u.
void BM_Propagate(benchmark::State& state) {
  const auto p = epchiral::make_params(1.5e-4, 8.8e-5, 0.0, 0.0);
  epchiral::EncirclementPath path;
  path.center_delta = -1.1489125293076057e-4;
  path.center_omega = -1.55e-5;
  path.radius = 1.55e-5;
  path.loop_time = static_cast<double>(state.range(0));
  const auto f0 = epchiral::eigensystem(epchiral::make_params(
      1.5e-4, 8.8e-5, path.center_delta, path.center_omega + path.radius));
  for (auto _ : state) {
    benchmark::DoNotOptimize(epchiral::propagate(p, path, f0.phi_plus));
  }
}
BENCHMARK(BM_Propagate)->Arg(10000)->Arg(478000)->Unit(benchmark::kMillisecond);

void BM_TrackBranches(benchmark::State& state) {
  const auto p = epchiral::make_params(1.5e-4, 8.8e-5, 0.0, 0.0);
  epchiral::EncirclementPath path;
  path.center_delta = -1.1489125293076057e-4;
  path.center_omega = -1.55e-5;
  path.radius = 1.55e-5;
  path.loop_time = 478000.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(epchiral::track_branches(p, path));
  }
}
BENCHMARK(BM_TrackBranches)->Unit(benchmark::kMillisecond);

void BM_OrientationAverage(benchmark::State& state) {
  epchiral::MicroscopicParams m;
  m.d1E = {std::complex<double>(1, 0), {0, 0.4}, {0.2, 0}};
  m.d2E = {std::complex<double>(0, 0), {1, 0}, {0.1, -0.3}};
  m.d12 = {std::complex<double>(0.3, 0), {0, 0}, {1, 0}};
  m.F1 = {std::complex<double>(1, 0), {0, 1}, {0, 0}};
  m.F2 = {std::complex<double>(0, 1), {1, 0}, {0, 0}};
  m.F3 = {std::complex<double>(0, 0), {0, 0}, {1, 0}};
  m.omega2 = 0.6;
  m.omega3 = 0.4;
  m.omega1 = 1.0;
  m.E2 = 0.4;
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        epchiral::mc_orientation_average(m, state.range(0), 42));
  }
}
BENCHMARK(BM_OrientationAverage)->Arg(10000)->Arg(100000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
