#pragma once

// Random instance generators and synthetic datasets shared by the test suites.

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include "it2fls/it2fls.hpp"

namespace it2fls::testing {

using Rng = std::mt19937_64;

inline double uniform(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline std::size_t uniform_index(Rng& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

/// Firing intervals with 0 < lower <= upper <= 1.
inline FiringIntervals random_firings(Rng& rng, std::size_t p) {
  FiringIntervals f{std::vector<double>(p), std::vector<double>(p)};
  for (std::size_t i = 0; i < p; ++i) {
    const double a = uniform(rng, 1e-3, 1.0);
    const double b = uniform(rng, 1e-3, 1.0);
    f.lower[i] = std::min(a, b);
    f.upper[i] = std::max(a, b);
  }
  return f;
}

inline std::vector<double> random_vector(Rng& rng, std::size_t n, double lo, double hi) {
  std::vector<double> v(n);
  for (auto& x : v) x = uniform(rng, lo, hi);
  return v;
}

/// Valid constrained antecedents with spreads in [lo, hi].
inline AntecedentParams random_antecedents(Rng& rng, std::size_t p, std::size_t m, FsType fs, FiringMode mode,
                                           double lo = 0.5, double hi = 2.0) {
  AntecedentParams a;
  a.fs_type = fs;
  a.firing_mode = mode;
  a.centers = Matrix(p, m);
  a.sigma_upper = Matrix(p, m);
  a.sigma_lower = Matrix(p, m);
  a.heights = Matrix(p, m);
  for (std::size_t i = 0; i < p; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      a.centers(i, j) = uniform(rng, -1.5, 1.5);
      const double su = uniform(rng, lo, hi);
      a.sigma_upper(i, j) = su;
      a.sigma_lower(i, j) = fs == FsType::H ? su : su * uniform(rng, 0.3, 1.0);
      a.heights(i, j) = uniform(rng, 0.3, 1.0);
    }
  }
  return a;
}

/// Random raw model whose firings stay well away from underflow on inputs in [-1.5, 1.5].
inline Model random_model(Rng& rng, const Architecture& arch) {
  Model model{arch, make_raw_params(arch)};
  auto& raw = model.raw;
  for (auto& v : raw.c_raw.values()) v = uniform(rng, -1.0, 1.0);
  for (auto& v : raw.su_raw.values()) v = uniform(rng, 0.3, 1.5);
  for (auto& v : raw.sl_raw.values()) v = uniform(rng, -1.0, 1.5);
  for (auto& v : raw.h_raw.values()) v = uniform(rng, -1.0, 2.0);
  for (auto& v : raw.a.values()) v = uniform(rng, -1.0, 1.0);
  for (auto& v : raw.a0) v = uniform(rng, -1.0, 1.0);
  if (raw.beta_raw) raw.beta_raw = uniform(rng, -1.5, 1.5);
  return model;
}

inline Dataset random_dataset(Rng& rng, std::size_t n, std::size_t m) {
  Dataset d;
  d.features = Matrix(n, m);
  for (auto& v : d.features.values()) v = uniform(rng, -1.5, 1.5);
  d.targets = random_vector(rng, n, -2.0, 2.0);
  return d;
}

/// y = sin(3x) + 0.3 |x| * noise with x ~ U(-2, 2) and standard normal noise.
inline Dataset heteroscedastic_1d(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  std::normal_distribution<double> noise(0.0, 1.0);
  Dataset d;
  d.feature_names = {"x"};
  d.target_name = "y";
  d.features = Matrix(n, 1);
  d.targets.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double x = uniform(rng, -2.0, 2.0);
    d.features(i, 0) = x;
    d.targets[i] = std::sin(3.0 * x) + 0.3 * std::abs(x) * noise(rng);
  }
  return d;
}

/// Synthetic stand-in for the white wine quality table: 11 physico-chemical
/// style features (correlated, skewed, on their usual scales) and an integer
/// quality score in [3, 9], 4898 rows by default.
inline Dataset wine_like(std::size_t n = 4898, std::uint64_t seed = 2024) {
  Rng rng(seed);
  std::normal_distribution<double> z(0.0, 1.0);
  Dataset d;
  d.feature_names = {"fixed_acidity", "volatile_acidity", "citric_acid", "residual_sugar",
                     "chlorides", "free_sulfur_dioxide", "total_sulfur_dioxide", "density",
                     "pH", "sulphates", "alcohol"};
  d.target_name = "quality";
  d.features = Matrix(n, 11);
  d.targets.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double sweet = z(rng);
    const double strength = z(rng);
    const double acid = z(rng);
    const double sulfur = z(rng);
    const double fixed = 6.85 + 0.84 * (0.8 * acid + 0.6 * z(rng));
    const double volatile_acid = 0.28 * std::exp(0.33 * z(rng));
    const double citric = std::max(0.0, 0.33 + 0.12 * (0.5 * acid + 0.87 * z(rng)));
    const double sugar = std::exp(1.4 + 0.9 * (0.7 * sweet + 0.7 * z(rng)));
    const double chlorides = 0.045 * std::exp(0.35 * (-0.5 * strength + 0.86 * z(rng)));
    const double free_so2 = std::max(2.0, 35.0 + 17.0 * (0.8 * sulfur + 0.6 * z(rng)));
    const double total_so2 = std::max(9.0, 138.0 + 42.0 * (0.7 * sulfur + 0.3 * sweet + 0.64 * z(rng)));
    const double alcohol = 10.5 + 1.2 * (0.85 * strength - 0.3 * sweet + 0.43 * z(rng));
    const double density = 0.994 + 0.0009 * sweet - 0.0011 * strength + 0.0003 * z(rng);
    const double ph = 3.19 + 0.15 * (-0.6 * acid + 0.8 * z(rng));
    const double sulphates = 0.49 + 0.11 * z(rng);
    const double latent = 0.45 * ((alcohol - 10.5) / 1.2) - 0.25 * ((volatile_acid - 0.28) / 0.1) +
                          0.12 * ((free_so2 - 35.0) / 17.0) - 0.08 * ((chlorides - 0.045) / 0.02) +
                          0.1 * std::tanh((sugar - 6.0) / 5.0) + 0.06 * ((sulphates - 0.49) / 0.11);
    const double q = std::round(5.88 + 0.7 * latent + 0.62 * z(rng));
    const double row[11] = {fixed, volatile_acid, citric, sugar, chlorides, free_so2,
                            total_so2, density, ph, sulphates, alcohol};
    for (std::size_t j = 0; j < 11; ++j) d.features(i, j) = row[j];
    d.targets[i] = std::clamp(q, 3.0, 9.0);
  }
  return d;
}

/// Writes a dataset as a headed CSV with round-trip precision.
inline void write_csv(const std::filesystem::path& path, const Dataset& d, char delim = ',') {
  std::ofstream out(path);
  out.precision(17);
  for (std::size_t j = 0; j < d.inputs(); ++j) {
    out << (j < d.feature_names.size() ? d.feature_names[j] : "x" + std::to_string(j + 1)) << delim;
  }
  out << (d.target_name.empty() ? "y" : d.target_name) << '\n';
  for (std::size_t i = 0; i < d.size(); ++i) {
    for (std::size_t j = 0; j < d.inputs(); ++j) out << d.features(i, j) << delim;
    out << d.targets[i] << '\n';
  }
}

/// All sixteen (cscm, fs type, firing mode) combinations.
inline std::vector<Architecture> all_architectures(std::size_t rules, std::size_t inputs) {
  std::vector<Architecture> out;
  for (auto c : {Cscm::KM, Cscm::WKM, Cscm::NT, Cscm::WNT})
    for (auto fs : {FsType::H, FsType::HS})
      for (auto mode : {FiringMode::PROD, FiringMode::HTSK2}) out.push_back({rules, inputs, fs, mode, c});
  return out;
}

}  // namespace it2fls::testing
