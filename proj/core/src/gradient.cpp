#include "it2fls/gradient.hpp"

#include <algorithm>
#include <cmath>

namespace it2fls {

namespace {

// d(pinball)/d(bound) on the branch selected by the forward residual.
double tilted_bound_grad(double y_true, double bound, double tau) {
  return y_true - bound >= 0.0 ? -tau : 1.0 - tau;
}

struct RuleGrads {
  std::vector<double> f_lower;
  std::vector<double> f_upper;
  std::vector<double> y;
  double beta = 0.0;

  explicit RuleGrads(std::size_t p) : f_lower(p), f_upper(p), y(p) {}
  void clear() {
    std::fill(f_lower.begin(), f_lower.end(), 0.0);
    std::fill(f_upper.begin(), f_upper.end(), 0.0);
    std::fill(y.begin(), y.end(), 0.0);
    beta = 0.0;
  }
};

// One KM bound: ratio over ranks taking `first` below the switch point and
// `second` above it. Accumulates dL/dfirst, dL/dsecond and dL/dy.
void km_bound_backward(const KmResult& km, std::size_t k, double value, double g,
                       std::span<const double> first, std::span<const double> second,
                       std::span<const double> y, std::span<double> g_first, std::span<double> g_second,
                       std::span<double> g_y) {
  double den = 0.0;
  for (std::size_t r = 0; r < km.order.size(); ++r) {
    const auto p = km.order[r];
    den += r < k ? first[p] : second[p];
  }
  for (std::size_t r = 0; r < km.order.size(); ++r) {
    const auto p = km.order[r];
    const double w = r < k ? first[p] : second[p];
    const double gw = g * (y[p] - value) / den;
    if (r < k) {
      g_first[p] += gw;
    } else {
      g_second[p] += gw;
    }
    g_y[p] += g * w / den;
  }
}

// Weighted NT (plain NT is the beta = 1/2 case).
void wnt_backward(std::span<const double> fl, std::span<const double> fu, std::span<const double> y,
                  double beta, const Prediction& pred, double g_crisp, double g_lower, double g_upper,
                  RuleGrads& out) {
  double lower_num = 0.0, upper_num = 0.0, lower_sum = 0.0, upper_sum = 0.0;
  for (std::size_t p = 0; p < y.size(); ++p) {
    lower_num += fl[p] * y[p];
    upper_num += fu[p] * y[p];
    lower_sum += fl[p];
    upper_sum += fu[p];
  }
  const double wl = beta;
  const double wu = 1.0 - beta;
  const double den = wl * lower_sum + wu * upper_sum;

  // crisp = (wl A + wu B) / D, lower = 2 wl A / D, upper = 2 wu B / D
  const double g_num = g_crisp / den;
  const double g_a2 = g_lower / den;
  const double g_b2 = g_upper / den;
  const double g_den = -(g_crisp * pred.y_crisp + g_lower * pred.y_lower + g_upper * pred.y_upper) / den;

  const double g_a = wl * g_num + 2.0 * wl * g_a2;
  const double g_b = wu * g_num + 2.0 * wu * g_b2;
  const double g_sl = wl * g_den;
  const double g_su = wu * g_den;
  out.beta = (lower_num - upper_num) * g_num + 2.0 * lower_num * g_a2 - 2.0 * upper_num * g_b2 +
             (lower_sum - upper_sum) * g_den;
  for (std::size_t p = 0; p < y.size(); ++p) {
    out.f_lower[p] = g_a * y[p] + g_sl;
    out.f_upper[p] = g_b * y[p] + g_su;
    out.y[p] = g_a * fl[p] + g_b * fu[p];
  }
}

}  // namespace

LossGradient backward(const Model& model, const Dataset& data, std::span<const std::size_t> rows,
                      const Quantiles& q, const LossTerms& terms) {
  const auto& arch = model.arch;
  const auto sys = model.system();
  const auto& ant = sys.antecedents;
  const auto p_count = arch.rules;
  const auto m_count = arch.inputs;
  if (data.inputs() != m_count) throw ShapeMismatch("dataset width does not match the model inputs");

  const double k = ant.spread_scale();
  const double k2 = k * k;
  const bool weighted = has_beta(arch.cscm);
  const double beta = sys.cscm.beta;

  LossGradient out;
  out.grad = model.raw;
  for (Matrix* m : {&out.grad.c_raw, &out.grad.su_raw, &out.grad.sl_raw, &out.grad.h_raw, &out.grad.a})
    std::fill(m->values().begin(), m->values().end(), 0.0);
  std::fill(out.grad.a0.begin(), out.grad.a0.end(), 0.0);
  if (out.grad.beta_raw) out.grad.beta_raw = 0.0;

  // Gradients w.r.t. the constrained spreads (and h * dL/dh), mapped to raw at the end.
  Matrix g_sigma_upper(p_count, m_count), g_sigma_lower(p_count, m_count), g_height(p_count, m_count);
  double g_beta = 0.0;

  std::vector<double> fl(p_count), fu(p_count), y(p_count);
  RuleGrads rg(p_count);

  const std::size_t n = rows.empty() ? data.size() : rows.size();
  const double inv_n = 1.0 / static_cast<double>(n);
  double loss = 0.0;

  for (std::size_t i = 0; i < n; ++i) {
    const auto row = rows.empty() ? i : rows[i];
    const auto x = data.features.row(row);
    const double t = data.targets[row];

    firing_intervals(x, ant, fl, fu);
    consequents(x, sys.consequents, y);

    Prediction pred;
    KmResult km;
    const bool is_km = arch.cscm == Cscm::KM || arch.cscm == Cscm::WKM;
    if (is_km) {
      km = km_type_reduce(fl, fu, y);
      pred.y_lower = km.y_lower;
      pred.y_upper = km.y_upper;
      pred.degenerate = km.degenerate;
      pred.y_crisp = arch.cscm == Cscm::KM ? km_defuzz(km.y_lower, km.y_upper)
                                           : wkm_defuzz(km.y_lower, km.y_upper, beta);
    } else {
      pred = arch.cscm == Cscm::NT ? nt_output(fl, fu, y) : wnt_output(fl, fu, y, beta);
    }

    double g_crisp = 0.0, g_lower = 0.0, g_upper = 0.0;
    if (terms.accuracy) {
      const double r = t - pred.y_crisp;
      loss += loss_logcosh(r);
      g_crisp = -std::tanh(r) * inv_n;
    }
    if (terms.lower) {
      loss += loss_tilted(t, pred.y_lower, q.lower);
      g_lower = tilted_bound_grad(t, pred.y_lower, q.lower) * inv_n;
    }
    if (terms.upper) {
      loss += loss_tilted(t, pred.y_upper, q.upper);
      g_upper = tilted_bound_grad(t, pred.y_upper, q.upper) * inv_n;
    }

    rg.clear();
    if (pred.degenerate) {
      // 0/0 in the forward pass: poison the gradient the same way autodiff would.
      const double nan = std::nan("");
      std::fill(rg.f_lower.begin(), rg.f_lower.end(), nan);
      std::fill(rg.f_upper.begin(), rg.f_upper.end(), nan);
      std::fill(rg.y.begin(), rg.y.end(), nan);
      rg.beta = nan;
    } else if (is_km) {
      const double wb = arch.cscm == Cscm::KM ? 0.5 : beta;
      const double gl = wb * g_crisp + g_lower;
      const double gu = (1.0 - wb) * g_crisp + g_upper;
      if (arch.cscm == Cscm::WKM) rg.beta = g_crisp * (km.y_lower - km.y_upper);
      km_bound_backward(km, km.switch_lower, km.y_lower, gl, fu, fl, y, rg.f_upper, rg.f_lower, rg.y);
      km_bound_backward(km, km.switch_upper, km.y_upper, gu, fl, fu, y, rg.f_lower, rg.f_upper, rg.y);
    } else {
      wnt_backward(fl, fu, y, arch.cscm == Cscm::NT ? 0.5 : beta, pred, g_crisp, g_lower, g_upper, rg);
      if (arch.cscm == Cscm::NT) rg.beta = 0.0;
    }
    if (weighted) g_beta += rg.beta;

    for (std::size_t p = 0; p < p_count; ++p) {
      out.grad.a0[p] += rg.y[p];
      for (std::size_t m = 0; m < m_count; ++m) {
        out.grad.a(p, m) += rg.y[p] * x[m];

        const double d = x[m] - ant.centers(p, m);
        const double su = ant.sigma_upper(p, m);
        const double sl = ant.sigma_lower(p, m);
        // d f / d theta = f * d(log f) / d theta; valid when f underflows to 0.
        const double gu_f = rg.f_upper[p] * fu[p];
        const double gl_f = rg.f_lower[p] * fl[p];
        out.grad.c_raw(p, m) += gu_f * d / (k2 * su * su) + gl_f * d / (k2 * sl * sl);
        g_sigma_upper(p, m) += gu_f * d * d / (k2 * su * su * su);
        g_sigma_lower(p, m) += gl_f * d * d / (k2 * sl * sl * sl);
        g_height(p, m) += gl_f;  // times 1/h, folded into dh/dh_raw below
      }
    }
  }
  out.loss = loss * inv_n;

  for (std::size_t p = 0; p < p_count; ++p) {
    for (std::size_t m = 0; m < m_count; ++m) {
      const double dsu = sigmoid(model.raw.su_raw(p, m));  // softplus'
      const double h = ant.heights(p, m);
      out.grad.h_raw(p, m) = g_height(p, m) * (1.0 - h);
      if (arch.fs_type == FsType::HS) {
        const double s = sigmoid(model.raw.sl_raw(p, m));
        out.grad.su_raw(p, m) = dsu * (g_sigma_upper(p, m) + g_sigma_lower(p, m) * s);
        out.grad.sl_raw(p, m) = g_sigma_lower(p, m) * ant.sigma_upper(p, m) * s * (1.0 - s);
      } else {
        out.grad.su_raw(p, m) = dsu * (g_sigma_upper(p, m) + g_sigma_lower(p, m));
      }
    }
  }
  if (weighted) out.grad.beta_raw = g_beta * beta * (1.0 - beta);
  return out;
}

std::vector<std::int64_t> branch_signature(const Model& model, const Dataset& data,
                                           std::span<const std::size_t> rows) {
  const auto sys = model.system();
  const auto p_count = model.arch.rules;
  const bool is_km = model.arch.cscm == Cscm::KM || model.arch.cscm == Cscm::WKM;
  std::vector<double> fl(p_count), fu(p_count), y(p_count);
  std::vector<std::int64_t> sig;
  const std::size_t n = rows.empty() ? data.size() : rows.size();
  for (std::size_t i = 0; i < n; ++i) {
    const auto row = rows.empty() ? i : rows[i];
    const auto x = data.features.row(row);
    const double t = data.targets[row];
    firing_intervals(x, sys.antecedents, fl, fu);
    consequents(x, sys.consequents, y);
    if (is_km) {
      const auto km = km_type_reduce(fl, fu, y);
      for (auto p : km.order) sig.push_back(static_cast<std::int64_t>(p));
      sig.push_back(static_cast<std::int64_t>(km.switch_lower));
      sig.push_back(static_cast<std::int64_t>(km.switch_upper));
    }
    const auto pred = type_reduce(sys.cscm, fl, fu, y);
    sig.push_back(t - pred.y_lower >= 0.0 ? 1 : 0);
    sig.push_back(t - pred.y_upper >= 0.0 ? 1 : 0);
  }
  return sig;
}

}  // namespace it2fls
