#include "coxtl/hecke.hpp"

#include <benchmark/benchmark.h>

using namespace coxtl;

// Full Kazhdan-Lusztig table; this recursion dominates the verification
// runtime on the larger groups.
static void BM_kl_table(benchmark::State& state) {
  CoxeterType ty = state.range(0) == 0 ? CoxeterType::B : CoxeterType::D;
  int rank = static_cast<int>(state.range(1));
  auto graph = CoxeterGraph::build(ty, rank);
  auto table = GroupTable::build(graph);
  for (auto _ : state) {
    KLCache kl(table);
    kl.compute_all();
    benchmark::DoNotOptimize(kl.rows_ready());
  }
  state.SetLabel(graph.label());
}
BENCHMARK(BM_kl_table)->Args({0, 3})->Args({0, 4})->Args({1, 4})->Unit(benchmark::kMillisecond);

static void BM_mu_row(benchmark::State& state) {
  auto table = GroupTable::build(CoxeterGraph::build(CoxeterType::B, 4));
  KLCache kl(table);
  kl.compute_all();
  EltId w = table->size() - 2;
  for (auto _ : state) benchmark::DoNotOptimize(kl.row(w).mus.size());
}
BENCHMARK(BM_mu_row);
