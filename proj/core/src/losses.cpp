#include "it2fls/losses.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace it2fls {

void validate(const Quantiles& q) {
  if (!(q.lower > 0.0 && q.lower < q.upper && q.upper < 1.0))
    throw std::invalid_argument("quantiles must satisfy 0 < lower < upper < 1");
}

double loss_logcosh(double residual) {
  const double a = std::abs(residual);
  return a + std::log1p(std::exp(-2.0 * a)) - std::numbers::ln2;
}

double loss_tilted(double y_true, double bound, double tau) {
  const double r = y_true - bound;
  return std::max(tau * r, (tau - 1.0) * r);
}

LossBreakdown evaluate_loss(const FuzzySystem& system, const Dataset& data, std::span<const std::size_t> rows,
                            const Quantiles& q, const LossTerms& terms) {
  const auto p_count = system.rules();
  std::vector<double> fl(p_count), fu(p_count), y(p_count);
  LossBreakdown out;
  const std::size_t n = rows.empty() ? data.size() : rows.size();
  for (std::size_t i = 0; i < n; ++i) {
    const auto row = rows.empty() ? i : rows[i];
    const auto x = data.features.row(row);
    const double t = data.targets[row];
    firing_intervals(x, system.antecedents, fl, fu);
    consequents(x, system.consequents, y);
    const auto pred = type_reduce(system.cscm, fl, fu, y);
    if (terms.accuracy) out.accuracy += loss_logcosh(t - pred.y_crisp);
    if (terms.lower) out.lower += loss_tilted(t, pred.y_lower, q.lower);
    if (terms.upper) out.upper += loss_tilted(t, pred.y_upper, q.upper);
  }
  const double inv = 1.0 / static_cast<double>(n);
  out.accuracy *= inv;
  out.lower *= inv;
  out.upper *= inv;
  out.total = out.accuracy + out.lower + out.upper;
  return out;
}

double composite_loss(const FuzzySystem& system, const Dataset& data, const Quantiles& q,
                      const LossTerms& terms) {
  if (data.size() == 0) throw EmptyDataset("composite loss needs a nonempty batch");
  const auto l = evaluate_loss(system, data, {}, q, terms);
  if (!std::isfinite(l.total)) throw NonFiniteLoss("composite loss is not finite");
  return l.total;
}

}  // namespace it2fls
