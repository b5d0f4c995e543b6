#include "it2fls/data.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>
#include <string_view>

namespace it2fls {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_fields(std::string_view line, char delim) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(delim, start);
    if (pos == std::string_view::npos) {
      out.push_back(trim(line.substr(start)));
      break;
    }
    out.push_back(trim(line.substr(start, pos - start)));
    start = pos + 1;
  }
  return out;
}

std::string unquote(std::string_view s) {
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') s = s.substr(1, s.size() - 2);
  return std::string(s);
}

bool parse_number(std::string_view s, double& out) {
  if (s.empty()) return false;
  if (s.front() == '+') s.remove_prefix(1);
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size() && std::isfinite(out);
}

double mean_of(std::span<const double> v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double sample_std(std::span<const double> v, double mean) {
  if (v.size() < 2) return 0.0;
  double acc = 0.0;
  for (double x : v) acc += (x - mean) * (x - mean);
  return std::sqrt(acc / static_cast<double>(v.size() - 1));
}

std::vector<double> column(const Matrix& m, std::size_t c) {
  std::vector<double> out(m.rows());
  for (std::size_t r = 0; r < m.rows(); ++r) out[r] = m(r, c);
  return out;
}

}  // namespace

Dataset parse_csv(const std::string& text, const CsvOptions& options) {
  std::istringstream in(text);
  std::string line;
  std::vector<std::string> header;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    for (auto f : split_fields(line, options.delimiter)) header.push_back(unquote(f));
    break;
  }
  if (header.empty()) throw EmptyDataset("CSV has no header row");
  if (options.has_target && header.size() < 2)
    throw ParseError(0, 1, "CSV needs at least one feature and one target column");

  // Without a target the sentinel column index lies past the last column.
  std::size_t target_col = options.has_target ? header.size() - 1 : header.size();
  if (options.has_target && !options.target.empty()) {
    const auto it = std::find(header.begin(), header.end(), options.target);
    if (it == header.end()) throw ParseError(0, 0, "target column '" + options.target + "' not found in header");
    target_col = static_cast<std::size_t>(it - header.begin());
  }

  Dataset data;
  if (options.has_target) data.target_name = header[target_col];
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (c != target_col) data.feature_names.push_back(header[c]);
  }

  std::vector<double> values;
  std::vector<double> row(header.size());
  std::size_t row_no = 0;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    ++row_no;
    const auto fields = split_fields(line, options.delimiter);
    if (fields.size() != header.size()) {
      throw ParseError(row_no, std::min(fields.size(), header.size()) + 1,
                       "row " + std::to_string(row_no) + " has " + std::to_string(fields.size()) +
                           " cells, expected " + std::to_string(header.size()));
    }
    for (std::size_t c = 0; c < fields.size(); ++c) {
      if (!parse_number(fields[c], row[c])) {
        throw ParseError(row_no, c + 1,
                         "row " + std::to_string(row_no) + ", column " + std::to_string(c + 1) + " ('" +
                             header[c] + "'): cannot parse '" + std::string(fields[c]) + "' as a number");
      }
    }
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c != target_col) values.push_back(row[c]);
    }
    data.targets.push_back(options.has_target ? row[target_col] : std::nan(""));
  }
  if (data.targets.empty()) throw EmptyDataset("CSV contains a header but no data rows");

  data.features = Matrix(data.targets.size(), data.feature_names.size());
  std::copy(values.begin(), values.end(), data.features.values().begin());
  return data;
}

Dataset load_csv(const std::filesystem::path& path, const CsvOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_csv(buf.str(), options);
}

std::vector<std::string> constant_columns(const Dataset& data) {
  std::vector<std::string> out;
  for (std::size_t c = 0; c < data.features.cols(); ++c) {
    const auto col = column(data.features, c);
    if (std::all_of(col.begin(), col.end(), [&](double v) { return v == col.front(); }))
      out.push_back(c < data.feature_names.size() ? data.feature_names[c] : "x" + std::to_string(c + 1));
  }
  if (!data.targets.empty() &&
      std::all_of(data.targets.begin(), data.targets.end(), [&](double v) { return v == data.targets.front(); }))
    out.push_back(data.target_name.empty() ? "target" : data.target_name);
  return out;
}

NormStats zscore_fit(const Dataset& data) {
  if (data.size() == 0) throw EmptyDataset("cannot fit normalization on an empty dataset");
  NormStats stats;
  for (std::size_t c = 0; c < data.features.cols(); ++c) {
    const auto col = column(data.features, c);
    const double mu = mean_of(col);
    const double sd = sample_std(col, mu);
    const auto name = c < data.feature_names.size() ? data.feature_names[c] : "x" + std::to_string(c + 1);
    if (!(sd > 0.0)) throw ConstantColumn(name, "column '" + name + "' has zero standard deviation");
    stats.feature_mean.push_back(mu);
    stats.feature_std.push_back(sd);
  }
  stats.target_mean = mean_of(data.targets);
  stats.target_std = sample_std(data.targets, stats.target_mean);
  if (!(stats.target_std > 0.0)) {
    const auto name = data.target_name.empty() ? std::string("target") : data.target_name;
    throw ConstantColumn(name, "target column '" + name + "' has zero standard deviation");
  }
  return stats;
}

Dataset zscore_apply(const NormStats& stats, const Dataset& data) {
  if (stats.feature_mean.size() != data.inputs())
    throw ShapeMismatch("normalization stats have " + std::to_string(stats.feature_mean.size()) +
                        " features, data has " + std::to_string(data.inputs()));
  Dataset out = data;
  for (std::size_t r = 0; r < out.features.rows(); ++r) {
    for (std::size_t c = 0; c < out.features.cols(); ++c) {
      out.features(r, c) = (out.features(r, c) - stats.feature_mean[c]) / stats.feature_std[c];
    }
  }
  for (auto& y : out.targets) y = (y - stats.target_mean) / stats.target_std;
  out.norm_stats = stats;
  return out;
}

double zscore_invert_target(const NormStats& stats, double value) {
  return value * stats.target_std + stats.target_mean;
}

Dataset zscore_invert(const NormStats& stats, const Dataset& data) {
  if (stats.feature_mean.size() != data.inputs()) throw ShapeMismatch("normalization stats do not match data");
  Dataset out = data;
  for (std::size_t r = 0; r < out.features.rows(); ++r) {
    for (std::size_t c = 0; c < out.features.cols(); ++c) {
      out.features(r, c) = out.features(r, c) * stats.feature_std[c] + stats.feature_mean[c];
    }
  }
  for (auto& y : out.targets) y = zscore_invert_target(stats, y);
  out.norm_stats.reset();
  return out;
}

Dataset subset(const Dataset& data, const std::vector<std::size_t>& rows) {
  Dataset out;
  out.feature_names = data.feature_names;
  out.target_name = data.target_name;
  out.norm_stats = data.norm_stats;
  out.features = Matrix(rows.size(), data.inputs());
  out.targets.reserve(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto src = data.features.row(rows[i]);
    std::copy(src.begin(), src.end(), out.features.row(i).begin());
    out.targets.push_back(data.targets[rows[i]]);
  }
  return out;
}

SplitResult split(const Dataset& data, double train_fraction, std::uint64_t seed) {
  if (!(train_fraction > 0.0 && train_fraction < 1.0))
    throw std::invalid_argument("train fraction must lie strictly between 0 and 1");
  const auto n = data.size();
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  std::mt19937_64 rng(seed);
  std::shuffle(perm.begin(), perm.end(), rng);

  // The epsilon absorbs products such as 0.7 * 10 landing just above 7.
  auto n_train = static_cast<std::size_t>(std::ceil(train_fraction * static_cast<double>(n) - 1e-9));
  n_train = std::min(n_train, n);

  SplitResult out;
  out.train_rows.assign(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(n_train));
  out.test_rows.assign(perm.begin() + static_cast<std::ptrdiff_t>(n_train), perm.end());
  out.train = subset(data, out.train_rows);
  out.test = subset(data, out.test_rows);
  return out;
}

std::vector<std::vector<std::size_t>> batches(std::size_t n, std::size_t minibatch_size,
                                              std::uint64_t epoch_seed) {
  if (minibatch_size == 0) throw std::invalid_argument("mini-batch size must be at least 1");
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  std::mt19937_64 rng(epoch_seed);
  std::shuffle(perm.begin(), perm.end(), rng);

  std::vector<std::vector<std::size_t>> out;
  out.reserve((n + minibatch_size - 1) / minibatch_size);
  for (std::size_t start = 0; start < n; start += minibatch_size) {
    const auto stop = std::min(n, start + minibatch_size);
    out.emplace_back(perm.begin() + static_cast<std::ptrdiff_t>(start),
                     perm.begin() + static_cast<std::ptrdiff_t>(stop));
  }
  return out;
}

}  // namespace it2fls
