#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "it2fls/data.hpp"
#include "it2fls/losses.hpp"
#include "it2fls/model.hpp"

namespace it2fls {

struct LossGradient {
  double loss = 0.0;
  RawParams grad;  // same shapes as the model's raw parameters
};

/// Reverse-mode gradient of the mean composite loss over `rows` (all rows when
/// empty) with respect to every raw parameter.
///
/// The chain is reparameterization -> memberships -> firings -> consequents ->
/// CSCM -> loss. At the non-smooth points the KM switch configuration and the
/// pinball branch are treated as constants at their forward values. NaN in the
/// forward pass propagates into the loss and the gradient.
LossGradient backward(const Model& model, const Dataset& data, std::span<const std::size_t> rows,
                      const Quantiles& q, const LossTerms& terms = {});

/// Encodes every discrete choice made in the forward pass over `rows`: the
/// consequent ordering and both KM switch points per sample (KM / WKM only)
/// plus the active branch of each pinball term. Two parameter vectors with
/// equal signatures lie in the same smooth piece of the loss.
std::vector<std::int64_t> branch_signature(const Model& model, const Dataset& data,
                                           std::span<const std::size_t> rows);

}  // namespace it2fls
