#include <benchmark/benchmark.h>

#include <cmath>
#include <map>
#include <vector>

#include "wic/chaos.hpp"
#include "wic/clt.hpp"
#include "wic/diagrams.hpp"
#include "wic/kernels.hpp"
#include "wic/partitions.hpp"
#include "wic/simulate.hpp"

using namespace wic;

namespace {

Kernel pair_chain(int cells) {
  auto sys = CellSystem::uniform(cells, 1.0);
  std::map<std::vector<int>, double> coeffs;
  const double value = 1.0 / std::sqrt(2.0 * cells);
  for (int m = 0; m + 1 < cells; m += 2) coeffs[{m, m + 1}] = value;
  return Kernel(sys, 2, coeffs);
}

SetPartition equal_rows(int count, int width) {
  std::vector<std::vector<int>> rows;
  for (int r = 0; r < count; ++r) {
    std::vector<int> row;
    for (int j = 1; j <= width; ++j) row.push_back(r * width + j);
    rows.push_back(row);
  }
  return SetPartition(count * width, rows);
}

Kernel dense_quadratic(int cells, unsigned seed) {
  auto sys = CellSystem::uniform(cells, 1.0);
  CounterRng rng(seed, 0);
  std::map<std::vector<int>, double> coeffs;
  for (int i = 0; i < cells; ++i)
    for (int j = i; j < cells; ++j)
      coeffs[{i, j}] = 2.0 * rng.next_unit() - 1.0;
  return Kernel(sys, 2, coeffs);
}

void bm_partition_stream(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) {
    std::size_t count = 0;
    for_each_set_partition(n, [&](const SetPartition&) { ++count; });
    benchmark::DoNotOptimize(count);
  }
}
BENCHMARK(bm_partition_stream)->Arg(8)->Arg(10);

void bm_mobius_full(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto lo = SetPartition::zero(n);
  const auto hi = SetPartition::one(n);
  for (auto _ : state) benchmark::DoNotOptimize(mobius(lo, hi));
}
BENCHMARK(bm_mobius_full)->Arg(7)->Arg(9);

void bm_enumerate_circular(benchmark::State& state) {
  const int width = static_cast<int>(state.range(0));
  const auto rows = equal_rows(4, width);
  for (auto _ : state) {
    auto found = enumerate_class(4 * width, rows, PartitionClass::M2c);
    benchmark::DoNotOptimize(found.size());
  }
}
BENCHMARK(bm_enumerate_circular)->Arg(2)->Arg(3);

void bm_joint_moment_quartic(benchmark::State& state) {
  const auto f = dense_quadratic(static_cast<int>(state.range(0)), 11);
  const std::vector<Kernel> fs(4, f);
  for (auto _ : state)
    benchmark::DoNotOptimize(joint_moment(MeasureKind::gaussian, fs));
}
BENCHMARK(bm_joint_moment_quartic)->Arg(3)->Arg(5);

void bm_chi4_report(benchmark::State& state) {
  const auto f = pair_chain(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    auto report = clt_report(f, 0.5);
    benchmark::DoNotOptimize(report.chi4_diagrams);
  }
}
BENCHMARK(bm_chi4_report)->Arg(16)->Arg(64);

void bm_contraction(benchmark::State& state) {
  const auto f = dense_quadratic(static_cast<int>(state.range(0)), 12);
  for (auto _ : state) {
    auto star = contract(f, f, 1, 1);
    benchmark::DoNotOptimize(star.coeffs.size());
  }
}
BENCHMARK(bm_contraction)->Arg(8)->Arg(16);

void bm_eval_quadratic_path(benchmark::State& state) {
  const auto f = pair_chain(static_cast<int>(state.range(0)));
  std::uint64_t i = 0;
  for (auto _ : state) {
    const auto s = sample_measure(MeasureKind::gaussian, f.system(), 77, i++);
    benchmark::DoNotOptimize(eval_gaussian_exact(f, s));
  }
}
BENCHMARK(bm_eval_quadratic_path)->Arg(32)->Arg(128);

}  // namespace

BENCHMARK_MAIN();
