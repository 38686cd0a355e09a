#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include "crossdrop/selection/selection.hpp"

namespace {

using namespace crossdrop;
using namespace crossdrop::selection;

std::vector<DisplayProfile> make_displays(std::mt19937_64& rng, int n) {
  std::uniform_real_distribution<double> pos(-5.0, 5.0);
  std::uniform_real_distribution<double> size(0.3, 3.0);
  std::uniform_real_distribution<double> angle(-3.14159, 3.14159);
  std::vector<DisplayProfile> displays;
  for (int i = 0; i < n; ++i) {
    DisplayProfile d;
    d.id = "d" + std::to_string(i);
    d.surface_pose = {{pos(rng), pos(rng), pos(rng)}, UnitQuat::from_axis_angle({0, 1, 0}, angle(rng))};
    d.width = size(rng);
    d.height = size(rng);
    displays.push_back(d);
  }
  return displays;
}

std::vector<Ray> make_rays(std::mt19937_64& rng, std::size_t n) {
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<Ray> rays;
  rays.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    rays.push_back({{g(rng), g(rng), g(rng)}, Vec3{g(rng), g(rng), g(rng)}.normalized()});
  }
  return rays;
}

void BM_PalmSerial(benchmark::State& state) {
  std::mt19937_64 rng(7);
  const auto displays = make_displays(rng, 10);
  const auto rays = make_rays(rng, static_cast<std::size_t>(state.range(0)));
  const SelectionConfig cfg;
  for (auto _ : state) {
    benchmark::DoNotOptimize(select_displays_by_palm_batch_serial(rays, displays, cfg));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_PalmParallel(benchmark::State& state) {
  std::mt19937_64 rng(7);
  const auto displays = make_displays(rng, 10);
  const auto rays = make_rays(rng, static_cast<std::size_t>(state.range(0)));
  const SelectionConfig cfg;
  for (auto _ : state) {
    benchmark::DoNotOptimize(select_displays_by_palm_batch(rays, displays, cfg));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

std::vector<GazeCandidate> make_candidates(std::mt19937_64& rng, int n) {
  std::uniform_real_distribution<double> pos(-5.0, 5.0);
  std::vector<GazeCandidate> out;
  for (int i = 0; i < n; ++i) {
    out.push_back({"c" + std::to_string(i), {pos(rng), pos(rng), pos(rng)}});
  }
  return out;
}

void BM_GazeSerial(benchmark::State& state) {
  std::mt19937_64 rng(11);
  const auto candidates = make_candidates(rng, 20);
  const auto rays = make_rays(rng, static_cast<std::size_t>(state.range(0)));
  const SelectionConfig cfg;
  for (auto _ : state) {
    benchmark::DoNotOptimize(select_contents_by_gaze_batch_serial(rays, candidates, cfg));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_GazeParallel(benchmark::State& state) {
  std::mt19937_64 rng(11);
  const auto candidates = make_candidates(rng, 20);
  const auto rays = make_rays(rng, static_cast<std::size_t>(state.range(0)));
  const SelectionConfig cfg;
  for (auto _ : state) {
    benchmark::DoNotOptimize(select_contents_by_gaze_batch(rays, candidates, cfg));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

}  // namespace

BENCHMARK(BM_PalmSerial)->Arg(1 << 10)->Arg(1 << 16);
BENCHMARK(BM_PalmParallel)->Arg(1 << 10)->Arg(1 << 16);
BENCHMARK(BM_GazeSerial)->Arg(1 << 10)->Arg(1 << 16);
BENCHMARK(BM_GazeParallel)->Arg(1 << 10)->Arg(1 << 16);

BENCHMARK_MAIN();
