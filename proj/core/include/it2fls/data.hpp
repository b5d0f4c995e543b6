#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "it2fls/types.hpp"

namespace it2fls {

/// Per-column mean and sample standard deviation.
struct NormStats {
  std::vector<double> feature_mean;
  std::vector<double> feature_std;
  double target_mean = 0.0;
  double target_std = 1.0;

  friend bool operator==(const NormStats&, const NormStats&) = default;
};

struct Dataset {
  Matrix features;  // N x M
  std::vector<double> targets;
  std::vector<std::string> feature_names;
  std::string target_name;
  std::optional<NormStats> norm_stats;  // set once the data has been normalized

  std::size_t size() const { return targets.size(); }
  std::size_t inputs() const { return features.cols(); }
};

/// A cell that failed to parse. `row` is the 1-based data row (the header is
/// not counted) and `column` the 1-based column.
class ParseError : public Error {
 public:
  ParseError(std::size_t row, std::size_t column, const std::string& what)
      : Error(what), row_(row), column_(column) {}
  std::size_t row() const { return row_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t row_;
  std::size_t column_;
};

class EmptyDataset : public Error {
 public:
  using Error::Error;
};

class ConstantColumn : public Error {
 public:
  ConstantColumn(std::string column, const std::string& what) : Error(what), column_(std::move(column)) {}
  const std::string& column() const { return column_; }

 private:
  std::string column_;
};

struct CsvOptions {
  std::string target;  // column name; empty selects the last column
  char delimiter = ',';
  bool has_target = true;  // false: every column is a feature and targets are NaN
};

/// Parse a headed numeric CSV. Rows with missing or non-numeric cells are
/// rejected with ParseError rather than imputed.
Dataset load_csv(const std::filesystem::path& path, const CsvOptions& options = {});
Dataset parse_csv(const std::string& text, const CsvOptions& options = {});

/// Names of columns whose values are all identical (candidates for a warning).
std::vector<std::string> constant_columns(const Dataset& data);

NormStats zscore_fit(const Dataset& data);
Dataset zscore_apply(const NormStats& stats, const Dataset& data);
double zscore_invert_target(const NormStats& stats, double value);
/// Inverse of zscore_apply for both features and target.
Dataset zscore_invert(const NormStats& stats, const Dataset& data);

/// Rows selected by index, preserving order.
Dataset subset(const Dataset& data, const std::vector<std::size_t>& rows);

struct SplitResult {
  Dataset train;
  Dataset test;
  std::vector<std::size_t> train_rows;
  std::vector<std::size_t> test_rows;
};

/// Seeded uniform shuffle; the first ceil(fraction * N) rows go to training.
SplitResult split(const Dataset& data, double train_fraction, std::uint64_t seed);

/// Index batches for one epoch: a seeded permutation cut into ceil(N / mbs)
/// slices, the last one possibly short.
std::vector<std::vector<std::size_t>> batches(std::size_t n, std::size_t minibatch_size,
                                              std::uint64_t epoch_seed);

}  // namespace it2fls
