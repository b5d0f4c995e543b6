#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "it2fls/fuzzification.hpp"
#include "it2fls/types.hpp"

namespace it2fls {

/// TSK linear consequents: y_p = a[p,:] . x + a0[p].
struct ConsequentParams {
  Matrix a;                // P x M
  std::vector<double> a0;  // P
};

struct CscmConfig {
  Cscm variant = Cscm::KM;
  double beta = 0.5;  // only meaningful for WKM / WNT
};

/// Type-reduced set [y_lower, y_upper] and crisp output for one input.
///
/// A degenerate firing (zero denominator) yields NaN values with the flag
/// set; the caller decides whether that counts as a failed run.
struct Prediction {
  double y_lower = 0.0;
  double y_upper = 0.0;
  double y_crisp = 0.0;
  bool degenerate = false;
};

/// Result of Karnik-Mendel type reduction together with the switch
/// configuration that produced it.
///
/// `order` lists rule indices sorted by consequent (stable on ties). The lower
/// bound weights the first `switch_lower` ranks with the upper firing and the
/// rest with the lower firing; the upper bound weights the first
/// `switch_upper` ranks with the lower firing and the rest with the upper one.
struct KmResult {
  double y_lower = 0.0;
  double y_upper = 0.0;
  bool degenerate = false;
  std::vector<std::size_t> order;
  std::size_t switch_lower = 0;
  std::size_t switch_upper = 0;
};

std::vector<double> consequents(std::span<const double> x, const ConsequentParams& params);
void consequents(std::span<const double> x, const ConsequentParams& params, std::span<double> out);

/// Exact KM bounds by exhaustive scan over the P+1 candidate switch points of
/// each bound.
KmResult km_type_reduce(std::span<const double> f_lower, std::span<const double> f_upper,
                        std::span<const double> y);
KmResult km_type_reduce(const FiringIntervals& f, std::span<const double> y);

/// Reference bounds by enumerating all 2^P binary weight assignments.
/// Intended for tests; P must not exceed 20.
struct TypeReducedSet {
  double y_lower = 0.0;
  double y_upper = 0.0;
  bool degenerate = false;
};
TypeReducedSet km_brute_force_oracle(const FiringIntervals& f, std::span<const double> y);

inline double km_defuzz(double y_lower, double y_upper) { return (y_lower + y_upper) / 2.0; }

inline double wkm_defuzz(double y_lower, double y_upper, double beta) {
  return beta * y_lower + (1.0 - beta) * y_upper;
}

/// Nie-Tan output with its equivalent TRS (crisp consequents).
Prediction nt_output(std::span<const double> f_lower, std::span<const double> f_upper,
                     std::span<const double> y);
Prediction nt_output(const FiringIntervals& f, std::span<const double> y);

/// Weighted Nie-Tan: beta blends lower and upper firings in the fuzzification part.
Prediction wnt_output(std::span<const double> f_lower, std::span<const double> f_upper,
                      std::span<const double> y, double beta);
Prediction wnt_output(const FiringIntervals& f, std::span<const double> y, double beta);

/// Constrained view of a complete IT2 TSK system.
struct FuzzySystem {
  AntecedentParams antecedents;
  ConsequentParams consequents;
  CscmConfig cscm;

  std::size_t rules() const { return antecedents.rules(); }
  std::size_t inputs() const { return antecedents.inputs(); }
};

/// Apply the configured CSCM to already computed firings and consequents.
Prediction type_reduce(const CscmConfig& cscm, std::span<const double> f_lower,
                       std::span<const double> f_upper, std::span<const double> y);

/// firing_intervals -> consequents -> CSCM for one input vector.
Prediction predict(std::span<const double> x, const FuzzySystem& system);

/// Row-wise prediction over an N x M feature matrix.
std::vector<Prediction> predict_all(const Matrix& features, const FuzzySystem& system);

}  // namespace it2fls
