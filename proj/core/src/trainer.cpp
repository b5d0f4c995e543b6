#include "it2fls/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "it2fls/gradient.hpp"

namespace it2fls {

namespace {

double squared_distance(std::span<const double> a, std::span<const double> b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += (a[i] - b[i]) * (a[i] - b[i]);
  return acc;
}

}  // namespace

void validate(const TrainConfig& config) {
  if (config.epochs == 0) throw std::invalid_argument("epochs must be at least 1");
  if (config.minibatch_size == 0) throw std::invalid_argument("mini-batch size must be at least 1");
  if (!(config.learning_rate > 0.0) || !std::isfinite(config.learning_rate))
    throw std::invalid_argument("learning rate must be a positive finite number");
  validate(config.quantiles);
  if (config.initial_beta && !(*config.initial_beta > 0.0 && *config.initial_beta < 1.0))
    throw std::invalid_argument("initial beta must lie strictly between 0 and 1");
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  // splitmix64 finalizer over a combined key
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

Matrix kmeans(const Matrix& points, std::size_t clusters, std::uint64_t seed, std::size_t iterations,
              std::vector<std::size_t>* assignment) {
  const auto n = points.rows();
  const auto dim = points.cols();
  if (n == 0) throw EmptyDataset("k-means needs at least one point");
  if (clusters == 0) throw std::invalid_argument("k-means needs at least one cluster");

  std::mt19937_64 rng(seed);
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  std::shuffle(perm.begin(), perm.end(), rng);

  Matrix centers(clusters, dim);
  for (std::size_t k = 0; k < clusters; ++k) {
    const auto src = points.row(perm[k % n]);
    std::copy(src.begin(), src.end(), centers.row(k).begin());
  }

  std::vector<std::size_t> label(n, 0);
  for (std::size_t it = 0; it <= iterations; ++it) {
    bool changed = it == 0;
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t best = 0;
      double best_d = std::numeric_limits<double>::infinity();
      for (std::size_t k = 0; k < clusters; ++k) {
        const double d = squared_distance(points.row(i), centers.row(k));
        if (d < best_d) {
          best_d = d;
          best = k;
        }
      }
      if (best != label[i]) changed = true;
      label[i] = best;
    }
    if (it == iterations || !changed) break;

    Matrix sums(clusters, dim);
    std::vector<std::size_t> counts(clusters, 0);
    for (std::size_t i = 0; i < n; ++i) {
      const auto row = points.row(i);
      auto acc = sums.row(label[i]);
      for (std::size_t j = 0; j < dim; ++j) acc[j] += row[j];
      ++counts[label[i]];
    }
    // An empty cluster keeps its previous center.
    for (std::size_t k = 0; k < clusters; ++k) {
      if (counts[k] == 0) continue;
      for (std::size_t j = 0; j < dim; ++j) centers(k, j) = sums(k, j) / static_cast<double>(counts[k]);
    }
  }
  if (assignment) *assignment = std::move(label);
  return centers;
}

Model initialize_model(const Architecture& arch, const Dataset& train, std::uint64_t seed,
                       std::optional<double> initial_beta) {
  if (train.size() == 0) throw EmptyDataset("cannot initialize a model from an empty training set");
  if (train.inputs() != arch.inputs) throw ShapeMismatch("training data width does not match architecture");
  if (arch.rules == 0) throw std::invalid_argument("a model needs at least one rule");

  Model model{arch, make_raw_params(arch)};
  auto& raw = model.raw;

  std::vector<std::size_t> label;
  raw.c_raw = kmeans(train.features, arch.rules, mix_seed(seed, 1), 25, &label);

  double spread = 1.0;
  if (arch.rules > 1) {
    double total = 0.0;
    std::size_t pairs = 0;
    for (std::size_t i = 0; i < arch.rules; ++i) {
      for (std::size_t j = i + 1; j < arch.rules; ++j) {
        total += std::sqrt(squared_distance(raw.c_raw.row(i), raw.c_raw.row(j)));
        ++pairs;
      }
    }
    const double half_mean = 0.5 * total / static_cast<double>(pairs);
    if (half_mean > 1e-3) spread = half_mean;
  }
  const double su_raw = softplus_inverse(spread - kSigmaMin);
  std::fill(raw.su_raw.values().begin(), raw.su_raw.values().end(), su_raw);
  // sl_raw = 0 -> sigma_lower = sigma_upper / 2; h_raw = 0 -> height 1/2; a = 0.

  const double global_mean =
      std::accumulate(train.targets.begin(), train.targets.end(), 0.0) / static_cast<double>(train.size());
  std::vector<double> sums(arch.rules, 0.0);
  std::vector<std::size_t> counts(arch.rules, 0);
  for (std::size_t i = 0; i < train.size(); ++i) {
    sums[label[i]] += train.targets[i];
    ++counts[label[i]];
  }
  for (std::size_t p = 0; p < arch.rules; ++p)
    raw.a0[p] = counts[p] > 0 ? sums[p] / static_cast<double>(counts[p]) : global_mean;

  if (raw.beta_raw) raw.beta_raw = initial_beta ? logit(*initial_beta) : 0.0;
  return model;
}

bool has_non_finite_output(const Model& model, const Dataset& data) {
  if (!all_finite(model.raw)) return true;
  const auto preds = predict_all(data.features, model.system());
  return std::any_of(preds.begin(), preds.end(), [](const Prediction& p) {
    return p.degenerate || !std::isfinite(p.y_lower) || !std::isfinite(p.y_upper) || !std::isfinite(p.y_crisp);
  });
}

TrainResult train_from(Model model, const Dataset& train_data, const TrainConfig& config) {
  validate(config);
  if (train_data.size() == 0) throw EmptyDataset("training set is empty");
  if (train_data.inputs() != model.arch.inputs) throw ShapeMismatch("training data width does not match model");

  const AdamOptions adam{config.learning_rate, config.adam_beta1, config.adam_beta2, config.adam_epsilon};
  auto flat = flatten(model.raw);
  AdamState state(flat.size());

  TrainResult result;
  double best_loss = std::numeric_limits<double>::infinity();
  Model best = model;

  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    const auto epoch_batches =
        batches(train_data.size(), config.minibatch_size, mix_seed(config.seed, 1000 + epoch));
    for (const auto& rows : epoch_batches) {
      const auto lg = backward(model, train_data, rows, config.quantiles, config.terms);
      result.step_losses.push_back(lg.loss);
      const auto g = flatten(lg.grad);
      adam_step(flat, g, state, adam);
      unflatten(flat, model.raw);
    }
    const double loss = evaluate_loss(model.system(), train_data, {}, config.quantiles, config.terms).total;
    result.epoch_losses.push_back(loss);
    if (std::isfinite(loss) && loss < best_loss) {
      best_loss = loss;
      best = model;
      result.best_epoch = epoch;
    }
    // Once a NaN reaches the parameters every later step is NaN as well.
    if (!all_finite(model.raw)) break;
  }

  result.model = result.best_epoch ? std::move(best) : std::move(model);
  result.failed_to_train = has_non_finite_output(result.model, train_data);
  return result;
}

TrainResult train(const Dataset& train_data, const TrainConfig& config, const Architecture& arch) {
  validate(config);
  auto model = initialize_model(arch, train_data, config.seed, config.initial_beta);
  return train_from(std::move(model), train_data, config);
}

}  // namespace it2fls
