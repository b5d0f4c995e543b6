#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "it2fls/types.hpp"

namespace it2fls {

/// Gaussian IT2 antecedent sets for P rules over M inputs.
///
/// Every set shares one center between its upper and lower membership
/// functions. The lower function is scaled by a height in (0, 1], so with
/// sigma_lower <= sigma_upper the lower membership never exceeds the upper one.
struct AntecedentParams {
  Matrix centers;      // P x M
  Matrix sigma_lower;  // P x M
  Matrix sigma_upper;  // P x M
  Matrix heights;      // P x M
  FsType fs_type = FsType::HS;
  FiringMode firing_mode = FiringMode::PROD;

  std::size_t rules() const { return centers.rows(); }
  std::size_t inputs() const { return centers.cols(); }

  /// Multiplier applied to every spread: sqrt(M) under HTSK2, 1 otherwise.
  double spread_scale() const;
};

/// Checks the structural invariants (shapes, positive spreads, sigma_lower <=
/// sigma_upper, heights in (0,1], equal spreads for H). Throws ShapeMismatch or
/// std::invalid_argument.
void validate(const AntecedentParams& params);

struct MembershipInterval {
  double lower = 0.0;
  double upper = 0.0;
};

struct FiringIntervals {
  std::vector<double> lower;
  std::vector<double> upper;

  std::size_t size() const { return lower.size(); }
};

/// Upper/lower membership of input component x_m in set (rule, input).
MembershipInterval eval_membership(double x_m, std::size_t rule, std::size_t input,
                                   const AntecedentParams& params);

/// Product t-norm over all inputs, per rule. No underflow guards: firings may
/// reach exactly 0 and that is reported downstream.
FiringIntervals firing_intervals(std::span<const double> x, const AntecedentParams& params);

/// Same as above, writing into caller-owned buffers of length P.
void firing_intervals(std::span<const double> x, const AntecedentParams& params,
                      std::span<double> lower, std::span<double> upper);

/// Type-1 HTSK normalized firing strengths: softmax over rules of
/// -sum_m (x_m - c)^2 / (2 M sigma_upper^2). Uses the upper spreads only.
std::vector<double> htsk_normalized_firings(std::span<const double> x,
                                            const AntecedentParams& params);

}  // namespace it2fls
