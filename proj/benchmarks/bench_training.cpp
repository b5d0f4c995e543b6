// Training-side costs: one mini-batch backward pass and one full epoch.

#include <benchmark/benchmark.h>

#include "generators.hpp"

using namespace it2fls;
using namespace it2fls::testing;

namespace {

void BM_Backward(benchmark::State& state) {
  const auto cscm = static_cast<Cscm>(state.range(0));
  Rng rng(4);
  const auto model = random_model(rng, {5, 11, FsType::HS, FiringMode::HTSK2, cscm});
  const auto data = random_dataset(rng, 64, 11);
  const Quantiles q;
  for (auto _ : state) benchmark::DoNotOptimize(backward(model, data, {}, q));
  state.SetItemsProcessed(state.iterations() * 64);
  state.SetLabel(std::string(to_string(cscm)));
}
BENCHMARK(BM_Backward)->DenseRange(0, 3);

void BM_Epoch(benchmark::State& state) {
  const auto d = wine_like(static_cast<std::size_t>(state.range(0)));
  const auto train_set = zscore_apply(zscore_fit(d), d);
  const Architecture arch{5, 11, FsType::HS, FiringMode::HTSK2, Cscm::WKM};
  const auto start = initialize_model(arch, train_set, 1);
  TrainConfig cfg;
  cfg.epochs = 1;
  for (auto _ : state) benchmark::DoNotOptimize(train_from(start, train_set, cfg));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Epoch)->Arg(1000)->Arg(3429)->Unit(benchmark::kMillisecond);

}  // namespace
