#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "it2fls/inference.hpp"
#include "it2fls/types.hpp"

namespace it2fls {

class DegenerateRange : public Error {
 public:
  using Error::Error;
};

class AllRunsFailed : public Error {
 public:
  using Error::Error;
};

/// Test-time quality of one model. PINAW is stored as a fraction; tables
/// multiply it (and RMSE) by 100.
struct MetricsReport {
  double rmse = 0.0;
  double picp = 0.0;   // percent
  double pinaw = 0.0;
  bool f2t = false;    // non-finite parameters or training-set predictions
  bool fpi = false;    // finite model whose test PICP is at most 50 %
  std::size_t n_samples = 0;
};

/// PICP at or below this value marks a failed prediction interval.
inline constexpr double kFpiPicpThreshold = 50.0;

double rmse(std::span<const double> y_true, std::span<const double> y_pred);

/// Percentage of targets inside the closed interval [lower, upper].
double picp(std::span<const double> y_true, std::span<const double> lower, std::span<const double> upper);

/// Mean interval width divided by the range of the true targets.
double pinaw(std::span<const double> lower, std::span<const double> upper, std::span<const double> y_true);

struct FailureFlags {
  bool f2t = false;
  bool fpi = false;
};

/// F2T when any parameter or training prediction is non-finite; otherwise FPI
/// when the test PICP is <= 50.
FailureFlags detect_failures(bool non_finite_model, std::span<const Prediction> train_outputs,
                             const MetricsReport& test_report);

/// RMSE / PICP / PINAW of predictions against targets. Non-finite predictions
/// make the metrics NaN; the F2T/FPI flags are left to detect_failures.
MetricsReport evaluate(std::span<const double> y_true, std::span<const Prediction> predictions);

struct MetricSummary {
  double mean = 0.0;
  double std = 0.0;  // sample standard deviation, 0 for a single value
  std::size_t count = 0;
};

/// Aggregate over repeated runs with F2T and FPI runs excluded.
struct AggregateSummary {
  MetricSummary rmse;
  MetricSummary picp;
  MetricSummary pinaw;
  std::size_t runs = 0;
  std::size_t f2t = 0;
  std::size_t fpi = 0;
};

/// Throws AllRunsFailed when every run is excluded, std::invalid_argument for
/// an empty list.
AggregateSummary aggregate(std::span<const MetricsReport> reports);

/// Same as aggregate() but returns nullopt (after filling the counts) when all
/// runs failed, for table rendering.
std::optional<AggregateSummary> try_aggregate(std::span<const MetricsReport> reports,
                                              AggregateSummary* counts_out = nullptr);

/// Box-and-whisker statistics: quartiles by linear interpolation, whiskers at
/// the most extreme points within 1.5 IQR, notches at median +- 1.57 IQR / sqrt(n).
struct BoxStats {
  double median = 0.0;
  double q1 = 0.0;
  double q3 = 0.0;
  double whisker_low = 0.0;
  double whisker_high = 0.0;
  double notch_low = 0.0;
  double notch_high = 0.0;
  std::vector<double> outliers;
  std::size_t n = 0;
};

BoxStats box_stats(std::span<const double> values);

}  // namespace it2fls
