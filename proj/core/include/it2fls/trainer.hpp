#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "it2fls/adam.hpp"
#include "it2fls/data.hpp"
#include "it2fls/losses.hpp"
#include "it2fls/model.hpp"

namespace it2fls {

struct TrainConfig {
  std::size_t epochs = 100;
  std::size_t minibatch_size = 64;
  double learning_rate = 0.01;
  Quantiles quantiles;
  std::uint64_t seed = 1;
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
  double adam_epsilon = 1e-8;
  LossTerms terms;
  /// Starting blend weight for WKM / WNT; defaults to 0.5 so the weighted
  /// variants start exactly at their unweighted parents.
  std::optional<double> initial_beta;
};

/// Throws std::invalid_argument for an unusable configuration.
void validate(const TrainConfig& config);

struct TrainResult {
  Model model;                      // parameters with the lowest end-of-epoch training loss
  std::vector<double> step_losses;  // mini-batch loss of every Adam step
  std::vector<double> epoch_losses; // full training-set loss after every epoch
  std::optional<std::size_t> best_epoch;  // 0-based; empty when no epoch had a finite loss
  bool failed_to_train = false;     // non-finite parameters or training-set predictions
};

/// Deterministic 64-bit mixer used to derive independent seeds.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);

/// Lloyd k-means with seeded random-sample initialization. Returns a
/// clusters x M center matrix and fills `assignment` when given.
Matrix kmeans(const Matrix& points, std::size_t clusters, std::uint64_t seed, std::size_t iterations = 25,
              std::vector<std::size_t>* assignment = nullptr);

/// Data-driven starting point: k-means centers, upper spreads at half the
/// mean inter-center distance, sigma_lower = sigma_upper / 2, heights 0.5,
/// zero slopes and per-cluster target means as biases.
Model initialize_model(const Architecture& arch, const Dataset& train, std::uint64_t seed,
                       std::optional<double> initial_beta = std::nullopt);

/// True when some parameter or some training-set prediction is non-finite.
bool has_non_finite_output(const Model& model, const Dataset& data);

/// Mini-batch Adam on the composite loss for `config.epochs` epochs, keeping
/// the parameters with the lowest full training loss seen at an epoch end.
TrainResult train(const Dataset& train_data, const TrainConfig& config, const Architecture& arch);

/// Same loop starting from the given model.
TrainResult train_from(Model model, const Dataset& train_data, const TrainConfig& config);

}  // namespace it2fls
