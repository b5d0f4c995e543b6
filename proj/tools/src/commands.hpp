#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "it2fls/cli/model_file.hpp"
#include "it2fls/it2fls.hpp"

namespace it2fls::cli {

/// Bad flag combination or value; maps to the usage exit code.
class UsageError : public Error {
 public:
  using Error::Error;
};

struct DataOptions {
  std::string path;
  std::string target;
  char delimiter = ',';
};

struct TrainOptions {
  std::size_t epochs = 100;
  std::size_t minibatch_size = 64;
  double learning_rate = 0.01;
  std::string quantiles = "0.005,0.995";
  std::uint64_t seed = 1;
  double split = 0.7;
  std::string normalize = "train";
  std::optional<double> beta;
};

struct TrainCommand {
  DataOptions data;
  std::size_t rules = 5;
  std::string cscm = "wkm";
  std::string fs_type = "hs";
  std::string firing = "htsk2";
  TrainOptions train;
  std::string out = ".";
};

struct EvalCommand {
  std::string model;
  DataOptions data;
  std::string out;  // directory for metrics.csv; empty prints only
};

struct PredictCommand {
  std::string model;
  DataOptions data;
  std::string out = "-";  // file, or "-" for standard output
};

struct BenchmarkCommand {
  DataOptions data;
  std::size_t rules = 5;
  std::vector<std::string> cscm{"km", "wkm", "nt", "wnt"};
  std::vector<std::string> fs_type{"h", "hs"};
  std::vector<std::string> firing{"prod", "htsk2"};
  TrainOptions train;
  std::size_t seeds = 20;
  std::size_t threads = 0;  // 0 = hardware concurrency
  std::string out = ".";
};

int cmd_train(const TrainCommand& cmd, std::ostream& out, std::ostream& err);
int cmd_eval(const EvalCommand& cmd, std::ostream& out, std::ostream& err);
int cmd_predict(const PredictCommand& cmd, std::ostream& out, std::ostream& err);
int cmd_benchmark(const BenchmarkCommand& cmd, std::ostream& out, std::ostream& err);

// Shared pieces.

Quantiles parse_quantiles(const std::string& text);
TrainConfig make_train_config(const TrainOptions& opts, Cscm cscm);
Json config_echo(const DataOptions& data, const TrainOptions& opts, const TrainConfig& config);

struct PreparedData {
  Dataset train;
  Dataset test;
  NormStats stats;
};

/// Split and z-score. "train" fits the statistics on the training split only;
/// "full" fits them on the whole table before splitting.
PreparedData prepare(const Dataset& raw, double train_fraction, std::uint64_t seed, const std::string& normalize);

struct RunOutcome {
  TrainResult result;
  MetricsReport train_report;
  MetricsReport test_report;  // carries the F2T / FPI flags of the run
};

RunOutcome run_once(const Architecture& arch, const TrainConfig& config, const PreparedData& data);

/// Loads `path` as data for an existing model: the target column is taken
/// from the flag, else the model's target name, else the last column. With
/// `require_target` false a file holding exactly the model's inputs is
/// accepted as features only.
Dataset load_for_model(const DataOptions& data, const ModelFile& model, bool require_target, std::ostream& err);

/// Warns about constant columns before normalization rejects them.
void warn_constant_columns(const Dataset& data, std::ostream& err);

}  // namespace it2fls::cli
