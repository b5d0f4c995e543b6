#include "it2fls/fuzzification.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace it2fls {

double AntecedentParams::spread_scale() const {
  return firing_mode == FiringMode::HTSK2 ? std::sqrt(static_cast<double>(inputs())) : 1.0;
}

void validate(const AntecedentParams& params) {
  const auto p = params.centers.rows();
  const auto m = params.centers.cols();
  if (p == 0 || m == 0) throw ShapeMismatch("antecedents need at least one rule and one input");
  for (const Matrix* mat : {&params.sigma_lower, &params.sigma_upper, &params.heights}) {
    if (mat->rows() != p || mat->cols() != m) throw ShapeMismatch("antecedent matrices must all be P x M");
  }
  for (std::size_t i = 0; i < p; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      const double sl = params.sigma_lower(i, j);
      const double su = params.sigma_upper(i, j);
      const double h = params.heights(i, j);
      const auto where = " at (" + std::to_string(i) + "," + std::to_string(j) + ")";
      if (!(sl > 0.0) || !(su > 0.0)) throw std::invalid_argument("non-positive spread" + where);
      if (sl > su) throw std::invalid_argument("sigma_lower exceeds sigma_upper" + where);
      if (!(h > 0.0) || h > 1.0) throw std::invalid_argument("LMF height outside (0,1]" + where);
      if (params.fs_type == FsType::H && sl != su)
        throw std::invalid_argument("H-type set requires equal spreads" + where);
    }
  }
}

MembershipInterval eval_membership(double x_m, std::size_t rule, std::size_t input,
                                   const AntecedentParams& params) {
  const double k = params.spread_scale();
  const double d = x_m - params.centers(rule, input);
  const double su = params.sigma_upper(rule, input) * k;
  const double sl = params.sigma_lower(rule, input) * k;
  return {params.heights(rule, input) * std::exp(-d * d / (2.0 * sl * sl)),
          std::exp(-d * d / (2.0 * su * su))};
}

void firing_intervals(std::span<const double> x, const AntecedentParams& params,
                      std::span<double> lower, std::span<double> upper) {
  const auto p_count = params.rules();
  const auto m_count = params.inputs();
  if (x.size() != m_count) throw ShapeMismatch("input length does not match antecedent inputs");
  for (std::size_t p = 0; p < p_count; ++p) {
    double fl = 1.0;
    double fu = 1.0;
    for (std::size_t m = 0; m < m_count; ++m) {
      const auto mu = eval_membership(x[m], p, m, params);
      fl *= mu.lower;
      fu *= mu.upper;
    }
    lower[p] = fl;
    upper[p] = fu;
  }
}

FiringIntervals firing_intervals(std::span<const double> x, const AntecedentParams& params) {
  FiringIntervals f{std::vector<double>(params.rules()), std::vector<double>(params.rules())};
  firing_intervals(x, params, f.lower, f.upper);
  return f;
}

std::vector<double> htsk_normalized_firings(std::span<const double> x,
                                            const AntecedentParams& params) {
  const auto p_count = params.rules();
  const auto m_count = params.inputs();
  if (x.size() != m_count) throw ShapeMismatch("input length does not match antecedent inputs");
  const double dim = static_cast<double>(m_count);

  std::vector<double> z(p_count, 0.0);
  for (std::size_t p = 0; p < p_count; ++p) {
    double acc = 0.0;
    for (std::size_t m = 0; m < m_count; ++m) {
      const double d = x[m] - params.centers(p, m);
      const double s = params.sigma_upper(p, m);
      acc -= d * d / (2.0 * dim * s * s);
    }
    z[p] = acc;
  }
  const double zmax = *std::max_element(z.begin(), z.end());
  double total = 0.0;
  for (auto& v : z) {
    v = std::exp(v - zmax);
    total += v;
  }
  for (auto& v : z) v /= total;
  return z;
}

}  // namespace it2fls
