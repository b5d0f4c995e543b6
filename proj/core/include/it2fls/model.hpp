#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "it2fls/inference.hpp"
#include "it2fls/types.hpp"

namespace it2fls {

/// Lower bound added to every upper spread.
inline constexpr double kSigmaMin = 1e-4;

struct Architecture {
  std::size_t rules = 5;
  std::size_t inputs = 1;
  FsType fs_type = FsType::HS;
  FiringMode firing_mode = FiringMode::HTSK2;
  Cscm cscm = Cscm::WKM;

  friend bool operator==(const Architecture&, const Architecture&) = default;
};

/// Unconstrained preimage of every learnable parameter.
///
///   sigma_upper = softplus(su_raw) + kSigmaMin
///   sigma_lower = sigma_upper * sigmoid(sl_raw)   (HS; equal to sigma_upper for H)
///   height      = sigmoid(h_raw)
///   beta        = sigmoid(beta_raw)               (WKM / WNT only)
///
/// Centers and consequents are used as-is. `sl_raw` is empty for H-type sets
/// and `beta_raw` is empty for KM / NT.
struct RawParams {
  Matrix c_raw;
  Matrix su_raw;
  Matrix sl_raw;
  Matrix h_raw;
  Matrix a;
  std::vector<double> a0;
  std::optional<double> beta_raw;

  friend bool operator==(const RawParams&, const RawParams&) = default;
};

/// Zero-filled raw parameters with the shapes implied by `arch`.
RawParams make_raw_params(const Architecture& arch);

std::size_t parameter_count(std::size_t rules, std::size_t inputs, FsType fs_type, Cscm cscm);
inline std::size_t parameter_count(const Architecture& arch) {
  return parameter_count(arch.rules, arch.inputs, arch.fs_type, arch.cscm);
}

/// Flat layout: c, su, sl (HS only), h, a, a0, beta (weighted only).
std::vector<double> flatten(const RawParams& raw);
void unflatten(std::span<const double> flat, RawParams& raw);

double sigmoid(double v);
double softplus(double v);
/// Inverse of softplus for v > 0.
double softplus_inverse(double v);
double logit(double p);

/// Map raw parameters onto the constrained system.
FuzzySystem reparam_forward(const RawParams& raw, const Architecture& arch);

struct Model {
  Architecture arch;
  RawParams raw;

  FuzzySystem system() const { return reparam_forward(raw, arch); }
};

/// True when every raw parameter is finite.
bool all_finite(const RawParams& raw);

}  // namespace it2fls
