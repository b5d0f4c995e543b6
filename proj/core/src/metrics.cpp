#include "it2fls/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace it2fls {

namespace {

void require_same_length(std::size_t a, std::size_t b, const char* what) {
  if (a != b) throw LengthMismatch(std::string(what) + ": input lengths differ");
}

MetricSummary summarize(const std::vector<double>& v) {
  MetricSummary s;
  s.count = v.size();
  if (v.empty()) return s;
  s.mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
  if (v.size() > 1) {
    double acc = 0.0;
    for (double x : v) acc += (x - s.mean) * (x - s.mean);
    s.std = std::sqrt(acc / static_cast<double>(v.size() - 1));
  }
  return s;
}

double quantile_sorted(const std::vector<double>& sorted, double q) {
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

}  // namespace

double rmse(std::span<const double> y_true, std::span<const double> y_pred) {
  require_same_length(y_true.size(), y_pred.size(), "rmse");
  if (y_true.empty()) throw LengthMismatch("rmse: needs at least one sample");
  double acc = 0.0;
  for (std::size_t i = 0; i < y_true.size(); ++i) acc += (y_true[i] - y_pred[i]) * (y_true[i] - y_pred[i]);
  return std::sqrt(acc / static_cast<double>(y_true.size()));
}

double picp(std::span<const double> y_true, std::span<const double> lower, std::span<const double> upper) {
  require_same_length(y_true.size(), lower.size(), "picp");
  require_same_length(y_true.size(), upper.size(), "picp");
  if (y_true.empty()) throw LengthMismatch("picp: needs at least one sample");
  std::size_t covered = 0;
  for (std::size_t i = 0; i < y_true.size(); ++i) {
    if (lower[i] <= y_true[i] && y_true[i] <= upper[i]) ++covered;
  }
  return 100.0 * static_cast<double>(covered) / static_cast<double>(y_true.size());
}

double pinaw(std::span<const double> lower, std::span<const double> upper, std::span<const double> y_true) {
  require_same_length(y_true.size(), lower.size(), "pinaw");
  require_same_length(y_true.size(), upper.size(), "pinaw");
  if (y_true.empty()) throw LengthMismatch("pinaw: needs at least one sample");
  const auto [lo, hi] = std::minmax_element(y_true.begin(), y_true.end());
  const double range = *hi - *lo;
  if (!(range > 0.0)) throw DegenerateRange("pinaw: target range is zero");
  double width = 0.0;
  for (std::size_t i = 0; i < y_true.size(); ++i) width += upper[i] - lower[i];
  return width / static_cast<double>(y_true.size()) / range;
}

FailureFlags detect_failures(bool non_finite_model, std::span<const Prediction> train_outputs,
                             const MetricsReport& test_report) {
  FailureFlags flags;
  flags.f2t = non_finite_model || std::any_of(train_outputs.begin(), train_outputs.end(), [](const Prediction& p) {
                return p.degenerate || !std::isfinite(p.y_crisp) || !std::isfinite(p.y_lower) ||
                       !std::isfinite(p.y_upper);
              });
  flags.fpi = !flags.f2t && !(test_report.picp > kFpiPicpThreshold);
  return flags;
}

MetricsReport evaluate(std::span<const double> y_true, std::span<const Prediction> predictions) {
  require_same_length(y_true.size(), predictions.size(), "evaluate");
  std::vector<double> crisp, lower, upper;
  crisp.reserve(predictions.size());
  lower.reserve(predictions.size());
  upper.reserve(predictions.size());
  for (const auto& p : predictions) {
    crisp.push_back(p.y_crisp);
    lower.push_back(p.y_lower);
    upper.push_back(p.y_upper);
  }
  MetricsReport r;
  r.n_samples = y_true.size();
  r.rmse = rmse(y_true, crisp);
  r.picp = picp(y_true, lower, upper);
  r.pinaw = pinaw(lower, upper, y_true);
  return r;
}

std::optional<AggregateSummary> try_aggregate(std::span<const MetricsReport> reports,
                                              AggregateSummary* counts_out) {
  if (reports.empty()) throw std::invalid_argument("aggregate: no reports");
  AggregateSummary s;
  s.runs = reports.size();
  std::vector<double> r, c, w;
  for (const auto& rep : reports) {
    if (rep.f2t) {
      ++s.f2t;
      continue;
    }
    if (rep.fpi) {
      ++s.fpi;
      continue;
    }
    r.push_back(rep.rmse);
    c.push_back(rep.picp);
    w.push_back(rep.pinaw);
  }
  s.rmse = summarize(r);
  s.picp = summarize(c);
  s.pinaw = summarize(w);
  if (counts_out) *counts_out = s;
  if (r.empty()) return std::nullopt;
  return s;
}

AggregateSummary aggregate(std::span<const MetricsReport> reports) {
  auto s = try_aggregate(reports);
  if (!s) throw AllRunsFailed("aggregate: every run failed (F2T or FPI)");
  return *s;
}

BoxStats box_stats(std::span<const double> values) {
  if (values.empty()) throw std::invalid_argument("box_stats: no values");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  BoxStats b;
  b.n = sorted.size();
  b.median = quantile_sorted(sorted, 0.5);
  b.q1 = quantile_sorted(sorted, 0.25);
  b.q3 = quantile_sorted(sorted, 0.75);
  const double iqr = b.q3 - b.q1;
  const double lo_fence = b.q1 - 1.5 * iqr;
  const double hi_fence = b.q3 + 1.5 * iqr;
  b.whisker_low = b.q1;
  b.whisker_high = b.q3;
  for (double v : sorted) {
    if (v < lo_fence || v > hi_fence) {
      b.outliers.push_back(v);
    } else {
      b.whisker_low = std::min(b.whisker_low, v);
      b.whisker_high = std::max(b.whisker_high, v);
    }
  }
  const double half_notch = 1.57 * iqr / std::sqrt(static_cast<double>(b.n));
  b.notch_low = b.median - half_notch;
  b.notch_high = b.median + half_notch;
  return b;
}

}  // namespace it2fls
