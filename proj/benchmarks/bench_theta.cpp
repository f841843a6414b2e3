#include "coxtl/tl.hpp"

#include <benchmark/benchmark.h>

using namespace coxtl;

// Quotient-map reduction table over the whole group.
static void BM_theta_table(benchmark::State& state) {
  auto graph = CoxeterGraph::build(CoxeterType::B, static_cast<int>(state.range(0)));
  auto table = GroupTable::build(graph);
  for (auto _ : state) {
    TLContext tl(table);
    benchmark::DoNotOptimize(tl.theta_basis(table->longest_element()).coords().size());
  }
  state.SetLabel(graph.label());
}
BENCHMARK(BM_theta_table)->Arg(3)->Arg(4)->Unit(benchmark::kMillisecond);

// Canonical (IC) basis over all fully commutative elements.
static void BM_canonical_table(benchmark::State& state) {
  auto graph = CoxeterGraph::build(CoxeterType::B, static_cast<int>(state.range(0)));
  auto table = GroupTable::build(graph);
  for (auto _ : state) {
    TLContext tl(table);
    for (EltId w : table->fc_elements()) benchmark::DoNotOptimize(&tl.canonical(w));
  }
  state.SetLabel(graph.label());
}
BENCHMARK(BM_canonical_table)->Arg(3)->Arg(4)->Unit(benchmark::kMillisecond);

static void BM_rewrite_step(benchmark::State& state) {
  auto table = GroupTable::build(CoxeterGraph::build(CoxeterType::B, 4));
  TLContext tl(table);
  const auto& fc = table->fc_elements();
  std::size_t i = 0;
  for (auto _ : state) {
    MonomialNF nf{1, 0, fc[i % fc.size()]};
    benchmark::DoNotOptimize(tl.rewrite_B(nf, static_cast<Gen>(i % 4)));
    ++i;
  }
}
BENCHMARK(BM_rewrite_step);
