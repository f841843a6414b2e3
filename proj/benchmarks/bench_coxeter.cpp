#include "coxtl/coxeter.hpp"

#include <benchmark/benchmark.h>

using namespace coxtl;

static void BM_enumerate(benchmark::State& state) {
  CoxeterType ty = state.range(0) == 0 ? CoxeterType::B : CoxeterType::D;
  int rank = static_cast<int>(state.range(1));
  auto graph = CoxeterGraph::build(ty, rank);
  for (auto _ : state) {
    auto table = GroupTable::build(graph);
    benchmark::DoNotOptimize(table->size());
  }
  state.SetLabel(graph.label());
}
BENCHMARK(BM_enumerate)->Args({0, 3})->Args({0, 4})->Args({1, 4})->Unit(benchmark::kMillisecond);

static void BM_fc_classification(benchmark::State& state) {
  auto graph = CoxeterGraph::build(CoxeterType::B, static_cast<int>(state.range(0)));
  for (auto _ : state) {
    auto table = GroupTable::build(graph);
    benchmark::DoNotOptimize(table->fc_count());
  }
  state.SetLabel(graph.label());
}
BENCHMARK(BM_fc_classification)->Arg(3)->Arg(4)->Unit(benchmark::kMillisecond);

static void BM_bruhat_leq(benchmark::State& state) {
  auto table = GroupTable::build(CoxeterGraph::build(CoxeterType::B, 4));
  EltId w0 = table->longest_element();
  EltId x = table->size() / 2;
  for (auto _ : state) benchmark::DoNotOptimize(bruhat_leq(*table, x, w0));
}
BENCHMARK(BM_bruhat_leq);
