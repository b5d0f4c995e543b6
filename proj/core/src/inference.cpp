#include "it2fls/inference.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>

namespace it2fls {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

bool all_finite(std::span<const double> v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

// Weighted mean over ranks, taking `first` for ranks < k and `second` after.
// Returns false when the weights sum to zero.
bool switched_ratio(std::span<const std::size_t> order, std::span<const double> first,
                    std::span<const double> second, std::span<const double> y, std::size_t k,
                    double& out) {
  double num = 0.0;
  double den = 0.0;
  for (std::size_t r = 0; r < order.size(); ++r) {
    const auto p = order[r];
    const double w = r < k ? first[p] : second[p];
    num += w * y[p];
    den += w;
  }
  if (!(den > 0.0)) return false;
  out = num / den;
  return true;
}

}  // namespace

void consequents(std::span<const double> x, const ConsequentParams& params, std::span<double> out) {
  const auto p_count = params.a.rows();
  const auto m_count = params.a.cols();
  if (x.size() != m_count) throw ShapeMismatch("input length does not match consequent inputs");
  for (std::size_t p = 0; p < p_count; ++p) {
    double acc = params.a0[p];
    const auto row = params.a.row(p);
    for (std::size_t m = 0; m < m_count; ++m) acc += row[m] * x[m];
    out[p] = acc;
  }
}

std::vector<double> consequents(std::span<const double> x, const ConsequentParams& params) {
  std::vector<double> out(params.a.rows());
  consequents(x, params, out);
  return out;
}

KmResult km_type_reduce(std::span<const double> f_lower, std::span<const double> f_upper,
                        std::span<const double> y) {
  const auto p_count = y.size();
  if (f_lower.size() != p_count || f_upper.size() != p_count)
    throw LengthMismatch("firing and consequent lengths differ");

  KmResult res;
  res.order.resize(p_count);
  std::iota(res.order.begin(), res.order.end(), std::size_t{0});
  std::stable_sort(res.order.begin(), res.order.end(),
                   [&](std::size_t i, std::size_t j) { return y[i] < y[j]; });

  const double upper_sum = std::accumulate(f_upper.begin(), f_upper.end(), 0.0);
  if (!(upper_sum > 0.0) || !all_finite(f_lower) || !all_finite(f_upper) || !all_finite(y)) {
    res.y_lower = res.y_upper = kNaN;
    res.degenerate = true;
    return res;
  }

  // Equal consequents (always the case for one rule): every switch point gives
  // the same bound, so pin both to the upper firings instead of letting
  // rounding pick one.
  if (y[res.order.front()] == y[res.order.back()]) {
    res.y_lower = res.y_upper = y[res.order.front()];
    res.switch_lower = p_count;
    res.switch_upper = 0;
    return res;
  }

  bool found = false;
  for (std::size_t k = 0; k <= p_count; ++k) {
    double v = 0.0;
    if (switched_ratio(res.order, f_upper, f_lower, y, k, v) && (!found || v < res.y_lower)) {
      res.y_lower = v;
      res.switch_lower = k;
      found = true;
    }
  }
  found = false;
  for (std::size_t k = 0; k <= p_count; ++k) {
    double v = 0.0;
    if (switched_ratio(res.order, f_lower, f_upper, y, k, v) && (!found || v > res.y_upper)) {
      res.y_upper = v;
      res.switch_upper = k;
      found = true;
    }
  }
  return res;
}

KmResult km_type_reduce(const FiringIntervals& f, std::span<const double> y) {
  return km_type_reduce(f.lower, f.upper, y);
}

TypeReducedSet km_brute_force_oracle(const FiringIntervals& f, std::span<const double> y) {
  const auto p_count = y.size();
  if (p_count > 20) throw std::invalid_argument("brute-force KM oracle is limited to 20 rules");
  if (f.lower.size() != p_count || f.upper.size() != p_count)
    throw LengthMismatch("firing and consequent lengths differ");

  TypeReducedSet out;
  const double upper_sum = std::accumulate(f.upper.begin(), f.upper.end(), 0.0);
  if (!(upper_sum > 0.0)) {
    out.y_lower = out.y_upper = kNaN;
    out.degenerate = true;
    return out;
  }
  bool found = false;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << p_count); ++mask) {
    double num = 0.0;
    double den = 0.0;
    for (std::size_t p = 0; p < p_count; ++p) {
      const double w = (mask >> p) & 1U ? f.upper[p] : f.lower[p];
      num += w * y[p];
      den += w;
    }
    if (!(den > 0.0)) continue;
    const double v = num / den;
    if (!found) {
      out.y_lower = out.y_upper = v;
      found = true;
    } else {
      out.y_lower = std::min(out.y_lower, v);
      out.y_upper = std::max(out.y_upper, v);
    }
  }
  return out;
}

Prediction wnt_output(std::span<const double> f_lower, std::span<const double> f_upper,
                      std::span<const double> y, double beta) {
  double lower_num = 0.0;
  double upper_num = 0.0;
  double lower_sum = 0.0;
  double upper_sum = 0.0;
  for (std::size_t p = 0; p < y.size(); ++p) {
    lower_num += f_lower[p] * y[p];
    upper_num += f_upper[p] * y[p];
    lower_sum += f_lower[p];
    upper_sum += f_upper[p];
  }
  const double wl = beta;
  const double wu = 1.0 - beta;
  const double den = wl * lower_sum + wu * upper_sum;
  if (!(den > 0.0) || !std::isfinite(den)) return {kNaN, kNaN, kNaN, true};
  Prediction out;
  out.y_crisp = (wl * lower_num + wu * upper_num) / den;
  out.y_lower = 2.0 * wl * lower_num / den;
  out.y_upper = 2.0 * wu * upper_num / den;
  return out;
}

Prediction wnt_output(const FiringIntervals& f, std::span<const double> y, double beta) {
  return wnt_output(f.lower, f.upper, y, beta);
}

Prediction nt_output(std::span<const double> f_lower, std::span<const double> f_upper,
                     std::span<const double> y) {
  double lower_num = 0.0;
  double upper_num = 0.0;
  double den = 0.0;
  for (std::size_t p = 0; p < y.size(); ++p) {
    lower_num += f_lower[p] * y[p];
    upper_num += f_upper[p] * y[p];
    den += f_lower[p] + f_upper[p];
  }
  if (!(den > 0.0) || !std::isfinite(den)) return {kNaN, kNaN, kNaN, true};
  Prediction out;
  out.y_crisp = (lower_num + upper_num) / den;
  out.y_lower = 2.0 * lower_num / den;
  out.y_upper = 2.0 * upper_num / den;
  return out;
}

Prediction nt_output(const FiringIntervals& f, std::span<const double> y) {
  return nt_output(f.lower, f.upper, y);
}

Prediction type_reduce(const CscmConfig& cscm, std::span<const double> f_lower,
                       std::span<const double> f_upper, std::span<const double> y) {
  switch (cscm.variant) {
    case Cscm::KM:
    case Cscm::WKM: {
      const auto km = km_type_reduce(f_lower, f_upper, y);
      if (km.degenerate) return {kNaN, kNaN, kNaN, true};
      const double crisp = cscm.variant == Cscm::KM ? km_defuzz(km.y_lower, km.y_upper)
                                                    : wkm_defuzz(km.y_lower, km.y_upper, cscm.beta);
      return {km.y_lower, km.y_upper, crisp, false};
    }
    case Cscm::NT:
      return nt_output(f_lower, f_upper, y);
    case Cscm::WNT:
      return wnt_output(f_lower, f_upper, y, cscm.beta);
  }
  return {kNaN, kNaN, kNaN, true};
}

Prediction predict(std::span<const double> x, const FuzzySystem& system) {
  const auto f = firing_intervals(x, system.antecedents);
  const auto y = consequents(x, system.consequents);
  return type_reduce(system.cscm, f.lower, f.upper, y);
}

std::vector<Prediction> predict_all(const Matrix& features, const FuzzySystem& system) {
  const auto p_count = system.rules();
  std::vector<double> fl(p_count), fu(p_count), y(p_count);
  std::vector<Prediction> out;
  out.reserve(features.rows());
  for (std::size_t n = 0; n < features.rows(); ++n) {
    const auto x = features.row(n);
    firing_intervals(x, system.antecedents, fl, fu);
    consequents(x, system.consequents, y);
    out.push_back(type_reduce(system.cscm, fl, fu, y));
  }
  return out;
}

}  // namespace it2fls
