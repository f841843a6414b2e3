#include "coxtl/laurent.hpp"

#include <benchmark/benchmark.h>

#include <random>

using namespace coxtl;

namespace {

std::vector<LaurentPoly> sample_polys(int count, int terms) {
  std::mt19937_64 rng(1);
  std::uniform_int_distribution<int> exp(-8, 8);
  std::uniform_int_distribution<std::int64_t> coeff(-5, 5);
  std::vector<LaurentPoly> out;
  for (int i = 0; i < count; ++i) {
    LaurentPoly p;
    for (int t = 0; t < terms; ++t) p += LaurentPoly::monomial(coeff(rng) | 1, exp(rng));
    out.push_back(p);
  }
  return out;
}

} // namespace

static void BM_laurent_mul(benchmark::State& state) {
  auto polys = sample_polys(64, static_cast<int>(state.range(0)));
  std::size_t i = 0;
  for (auto _ : state) {
    const auto& a = polys[i % polys.size()];
    const auto& b = polys[(i * 7 + 3) % polys.size()];
    benchmark::DoNotOptimize(a * b);
    ++i;
  }
}
BENCHMARK(BM_laurent_mul)->Arg(2)->Arg(4)->Arg(8);

static void BM_laurent_add(benchmark::State& state) {
  auto polys = sample_polys(64, static_cast<int>(state.range(0)));
  std::size_t i = 0;
  for (auto _ : state) {
    const auto& a = polys[i % polys.size()];
    const auto& b = polys[(i * 11 + 5) % polys.size()];
    benchmark::DoNotOptimize(a + b);
    ++i;
  }
}
BENCHMARK(BM_laurent_add)->Arg(4)->Arg(8);
