// Serial reference kernels against their OpenMP counterparts.

#include <benchmark/benchmark.h>

#include <random>

#include "spek/generators.hpp"
#include "spek/kernels.hpp"
#include "spek/relation.hpp"

using namespace spek;

namespace {

Relation random_relation(int m, int n, double density, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return Relation::from_predicate(kBaseIV, m, n, [&](std::uint64_t, std::uint64_t) {
    return static_cast<double>(rng() % 1000) < density * 1000.0;
  });
}

kernels::BoolTensor random_tensor(std::vector<int> vars, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  kernels::BoolTensor t = kernels::make_tensor(kBaseIV, std::move(vars));
  for (auto& c : t.cells) c = rng() % 4 == 0;
  return t;
}

template <Relation (*Kernel)(const Relation&, const Relation&)>
void BM_Compose(benchmark::State& state) {
  const int k = static_cast<int>(state.range(0));
  const Relation a = random_relation(k, k, 0.05, 1);
  const Relation b = random_relation(k, k, 0.05, 2);
  for (auto _ : state) benchmark::DoNotOptimize(Kernel(a, b));
}

template <Relation (*Kernel)(const Relation&, const Relation&)>
void BM_Tensor(benchmark::State& state) {
  const int k = static_cast<int>(state.range(0));
  const Relation a = random_relation(k, k, 0.1, 3);
  const Relation b = random_relation(k, k, 0.1, 4);
  for (auto _ : state) benchmark::DoNotOptimize(Kernel(a, b));
}

template <kernels::BoolTensor (*Kernel)(const kernels::BoolTensor&, const kernels::BoolTensor&, std::span<const int>)>
void BM_Join(benchmark::State& state) {
  const int k = static_cast<int>(state.range(0));
  std::vector<int> va, vb, keep;
  for (int i = 0; i < k; ++i) va.push_back(i);
  for (int i = k - 2; i < 2 * k - 2; ++i) vb.push_back(i);
  for (int i = 0; i < 2 * k - 2; ++i)
    if (i != k - 2 && i != k - 1) keep.push_back(i);
  const auto a = random_tensor(va, 5);
  const auto b = random_tensor(vb, 6);
  for (auto _ : state) benchmark::DoNotOptimize(Kernel(a, b, keep));
}

}  // namespace

BENCHMARK(BM_Compose<kernels::compose_serial>)->Arg(2)->Arg(3)->Arg(4);
BENCHMARK(BM_Compose<kernels::compose_parallel>)->Arg(2)->Arg(3)->Arg(4);
BENCHMARK(BM_Tensor<kernels::tensor_serial>)->Arg(1)->Arg(2);
BENCHMARK(BM_Tensor<kernels::tensor_parallel>)->Arg(1)->Arg(2);
BENCHMARK(BM_Join<kernels::join_serial>)->Arg(3)->Arg(4);
BENCHMARK(BM_Join<kernels::join_parallel>)->Arg(3)->Arg(4);

BENCHMARK_MAIN();
