#include "it2fls/model.hpp"

#include <algorithm>
#include <cmath>

namespace it2fls {

RawParams make_raw_params(const Architecture& arch) {
  const auto p = arch.rules;
  const auto m = arch.inputs;
  RawParams raw;
  raw.c_raw = Matrix(p, m);
  raw.su_raw = Matrix(p, m);
  if (arch.fs_type == FsType::HS) raw.sl_raw = Matrix(p, m);
  raw.h_raw = Matrix(p, m);
  raw.a = Matrix(p, m);
  raw.a0.assign(p, 0.0);
  if (has_beta(arch.cscm)) raw.beta_raw = 0.0;
  return raw;
}

std::size_t parameter_count(std::size_t rules, std::size_t inputs, FsType fs_type, Cscm cscm) {
  const auto pm = rules * inputs;
  const auto per_set = fs_type == FsType::HS ? 5 : 4;
  return per_set * pm + rules + (has_beta(cscm) ? 1 : 0);
}

std::vector<double> flatten(const RawParams& raw) {
  std::vector<double> out;
  out.reserve(raw.c_raw.size() * 5 + raw.a0.size() + 1);
  for (const Matrix* m : {&raw.c_raw, &raw.su_raw, &raw.sl_raw, &raw.h_raw, &raw.a}) {
    out.insert(out.end(), m->values().begin(), m->values().end());
  }
  out.insert(out.end(), raw.a0.begin(), raw.a0.end());
  if (raw.beta_raw) out.push_back(*raw.beta_raw);
  return out;
}

void unflatten(std::span<const double> flat, RawParams& raw) {
  std::size_t expected = raw.a0.size() + (raw.beta_raw ? 1 : 0);
  for (const Matrix* m : {&raw.c_raw, &raw.su_raw, &raw.sl_raw, &raw.h_raw, &raw.a}) expected += m->size();
  if (flat.size() != expected) throw LengthMismatch("flat parameter vector has the wrong length");

  auto it = flat.begin();
  for (Matrix* m : {&raw.c_raw, &raw.su_raw, &raw.sl_raw, &raw.h_raw, &raw.a}) {
    std::copy_n(it, m->size(), m->values().begin());
    it += static_cast<std::ptrdiff_t>(m->size());
  }
  std::copy_n(it, raw.a0.size(), raw.a0.begin());
  it += static_cast<std::ptrdiff_t>(raw.a0.size());
  if (raw.beta_raw) raw.beta_raw = *it;
}

double sigmoid(double v) {
  if (v >= 0.0) return 1.0 / (1.0 + std::exp(-v));
  const double e = std::exp(v);
  return e / (1.0 + e);
}

double softplus(double v) { return std::max(v, 0.0) + std::log1p(std::exp(-std::abs(v))); }

double softplus_inverse(double v) {
  if (v > 30.0) return v + std::log1p(-std::exp(-v));
  return std::log(std::expm1(v));
}

double logit(double p) { return std::log(p / (1.0 - p)); }

FuzzySystem reparam_forward(const RawParams& raw, const Architecture& arch) {
  const auto p_count = arch.rules;
  const auto m_count = arch.inputs;
  FuzzySystem sys;
  auto& ant = sys.antecedents;
  ant.fs_type = arch.fs_type;
  ant.firing_mode = arch.firing_mode;
  ant.centers = raw.c_raw;
  ant.sigma_upper = Matrix(p_count, m_count);
  ant.sigma_lower = Matrix(p_count, m_count);
  ant.heights = Matrix(p_count, m_count);
  for (std::size_t p = 0; p < p_count; ++p) {
    for (std::size_t m = 0; m < m_count; ++m) {
      const double su = softplus(raw.su_raw(p, m)) + kSigmaMin;
      ant.sigma_upper(p, m) = su;
      ant.sigma_lower(p, m) = arch.fs_type == FsType::HS ? su * sigmoid(raw.sl_raw(p, m)) : su;
      ant.heights(p, m) = sigmoid(raw.h_raw(p, m));
    }
  }
  sys.consequents.a = raw.a;
  sys.consequents.a0 = raw.a0;
  sys.cscm.variant = arch.cscm;
  sys.cscm.beta = raw.beta_raw ? sigmoid(*raw.beta_raw) : 0.5;
  return sys;
}

bool all_finite(const RawParams& raw) {
  const auto flat = flatten(raw);
  return std::all_of(flat.begin(), flat.end(), [](double v) { return std::isfinite(v); });
}

}  // namespace it2fls
