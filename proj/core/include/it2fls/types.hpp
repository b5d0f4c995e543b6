#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace it2fls {

/// IT2 fuzzy set parameterization: H ties the lower spread to the upper one,
/// HS learns them independently.
enum class FsType { H, HS };

/// How per-dimension memberships are combined into rule firings.
enum class FiringMode { PROD, HTSK2 };

/// Center-of-sets calculation method.
enum class Cscm { KM, WKM, NT, WNT };

std::string_view to_string(FsType v);
std::string_view to_string(FiringMode v);
std::string_view to_string(Cscm v);

// Case-insensitive parsers; throw std::invalid_argument on unknown names.
FsType parse_fs_type(std::string_view s);
FiringMode parse_firing_mode(std::string_view s);
Cscm parse_cscm(std::string_view s);

/// True for the variants that carry the learnable blending weight beta.
constexpr bool has_beta(Cscm v) { return v == Cscm::WKM || v == Cscm::WNT; }

/// Dense row-major matrix of doubles.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const double> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

  std::vector<double>& values() { return data_; }
  const std::vector<double>& values() const { return data_; }

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class LengthMismatch : public Error {
 public:
  using Error::Error;
};

class ShapeMismatch : public Error {
 public:
  using Error::Error;
};

}  // namespace it2fls
