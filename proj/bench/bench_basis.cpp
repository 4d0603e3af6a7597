#include <benchmark/benchmark.h>

#include "qinv/quasiinv.hpp"

using namespace qinv;

namespace {

struct Case {
  const char* group;
  const char* k;
  int max_deg;
};

const Case kCases[] = {{"cyclic:3", "0,1,1", 20}, {"dihedral:3:3", "1", 14}, {"dihedral:4:1", "1;0,1,1", 12}};

void basis(benchmark::State& state, bool parallel) {
  const Case& c = kCases[state.range(0)];
  ReflectionGroup g = builtin_group(c.group);
  Multiplicity k = Multiplicity::parse(g, c.k);
  for (auto _ : state) benchmark::DoNotOptimize(compute_basis(g, k, c.max_deg, -1, parallel));
  state.SetLabel(std::string(c.group) + " k=" + c.k + " d<=" + std::to_string(c.max_deg));
}

void bm_basis_serial(benchmark::State& state) { basis(state, false); }
void bm_basis_parallel(benchmark::State& state) { basis(state, true); }

}  // namespace

BENCHMARK(bm_basis_serial)->DenseRange(0, 2)->Unit(benchmark::kMillisecond);
BENCHMARK(bm_basis_parallel)->DenseRange(0, 2)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
