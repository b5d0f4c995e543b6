#pragma once

#include <cstddef>
#include <span>

#include "it2fls/data.hpp"
#include "it2fls/inference.hpp"
#include "it2fls/types.hpp"

namespace it2fls {

/// Target quantiles for the lower and upper bounds of the prediction interval.
struct Quantiles {
  double lower = 0.005;
  double upper = 0.995;
};

/// Validates 0 < lower < upper < 1; throws std::invalid_argument otherwise.
void validate(const Quantiles& q);

/// Which parts of the composite loss are active. All three are on for the
/// dual objective; disabling terms is useful for isolating a single quantile fit.
struct LossTerms {
  bool accuracy = true;
  bool lower = true;
  bool upper = true;
};

class NonFiniteLoss : public Error {
 public:
  using Error::Error;
};

/// log(cosh(r)) evaluated as |r| + log((1 + exp(-2|r|)) / 2); never overflows.
double loss_logcosh(double residual);

/// Pinball loss max(tau (y - b), (tau - 1)(y - b)).
double loss_tilted(double y_true, double bound, double tau);

/// Batch means of every loss term; NaN is propagated, not masked.
struct LossBreakdown {
  double total = 0.0;
  double accuracy = 0.0;
  double lower = 0.0;
  double upper = 0.0;
};

/// Loss over the given rows (all rows when `rows` is empty).
LossBreakdown evaluate_loss(const FuzzySystem& system, const Dataset& data, std::span<const std::size_t> rows,
                            const Quantiles& q, const LossTerms& terms = {});

/// Mean composite loss over the whole dataset. Throws NonFiniteLoss when any
/// term is NaN or infinite, and EmptyDataset for an empty batch.
double composite_loss(const FuzzySystem& system, const Dataset& data, const Quantiles& q,
                      const LossTerms& terms = {});

}  // namespace it2fls
