// Forward-pass costs: firing, KM switch scan, full prediction.

#include <benchmark/benchmark.h>

#include "generators.hpp"

using namespace it2fls;
using namespace it2fls::testing;

namespace {

void BM_Firing(benchmark::State& state) {
  const auto p = static_cast<std::size_t>(state.range(0));
  const auto m = static_cast<std::size_t>(state.range(1));
  Rng rng(1);
  const auto ant = random_antecedents(rng, p, m, FsType::HS, FiringMode::HTSK2);
  const auto x = random_vector(rng, m, -1.5, 1.5);
  std::vector<double> lo(p), hi(p);
  for (auto _ : state) {
    firing_intervals(x, ant, lo, hi);
    benchmark::DoNotOptimize(lo.data());
    benchmark::DoNotOptimize(hi.data());
  }
}
BENCHMARK(BM_Firing)->Args({5, 11})->Args({16, 11})->Args({5, 50})->Args({64, 50});

void BM_KmTypeReduce(benchmark::State& state) {
  const auto p = static_cast<std::size_t>(state.range(0));
  Rng rng(2);
  const auto f = random_firings(rng, p);
  const auto y = random_vector(rng, p, -10.0, 10.0);
  for (auto _ : state) benchmark::DoNotOptimize(km_type_reduce(f, y));
}
BENCHMARK(BM_KmTypeReduce)->RangeMultiplier(2)->Range(2, 64);

void BM_KmBruteForce(benchmark::State& state) {
  const auto p = static_cast<std::size_t>(state.range(0));
  Rng rng(2);
  const auto f = random_firings(rng, p);
  const auto y = random_vector(rng, p, -10.0, 10.0);
  for (auto _ : state) benchmark::DoNotOptimize(km_brute_force_oracle(f, y));
}
BENCHMARK(BM_KmBruteForce)->DenseRange(2, 12, 5);

void BM_Predict(benchmark::State& state) {
  const auto cscm = static_cast<Cscm>(state.range(0));
  Rng rng(3);
  const auto model = random_model(rng, {5, 11, FsType::HS, FiringMode::HTSK2, cscm});
  const auto system = model.system();
  const auto x = random_vector(rng, 11, -1.5, 1.5);
  for (auto _ : state) benchmark::DoNotOptimize(predict(x, system));
  state.SetLabel(std::string(to_string(cscm)));
}
BENCHMARK(BM_Predict)->DenseRange(0, 3);

}  // namespace
