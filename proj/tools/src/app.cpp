#include "it2fls/cli/app.hpp"

#include <filesystem>
#include <ostream>

#include <CLI11.hpp>

#include "commands.hpp"

namespace it2fls::cli {

namespace {

void add_data_options(CLI::App& sub, DataOptions& d, bool required) {
  auto* opt = sub.add_option("--data", d.path, "CSV file with a header row");
  if (required) opt->required();
  sub.add_option("--target", d.target, "target column name (default: last column)");
  sub.add_option("--delimiter", d.delimiter, "field delimiter")->default_str(",");
}

void add_train_options(CLI::App& sub, TrainOptions& t) {
  sub.add_option("--epochs", t.epochs, "training epochs")->capture_default_str()->check(CLI::PositiveNumber);
  sub.add_option("--mbs", t.minibatch_size, "mini-batch size")->capture_default_str()->check(CLI::PositiveNumber);
  sub.add_option("--lr", t.learning_rate, "Adam learning rate")->capture_default_str()->check(CLI::PositiveNumber);
  sub.add_option("--quantiles", t.quantiles, "lower,upper target quantiles")->capture_default_str();
  sub.add_option("--seed", t.seed, "random seed")->capture_default_str();
  sub.add_option("--split", t.split, "training fraction")->capture_default_str()->check(CLI::Range(0.0, 1.0));
  sub.add_option("--normalize", t.normalize, "fit z-score statistics on the training split or the full table")
      ->capture_default_str()
      ->check(CLI::IsMember({"train", "full"}));
}

const auto kCscm = CLI::IsMember({"km", "wkm", "nt", "wnt"}, CLI::ignore_case);
const auto kFsType = CLI::IsMember({"h", "hs"}, CLI::ignore_case);
const auto kFiring = CLI::IsMember({"prod", "htsk2"}, CLI::ignore_case);

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Interval type-2 TSK fuzzy regression with prediction intervals", "it2fls"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "help for every command");

  TrainCommand train;
  auto* train_cmd = app.add_subcommand("train", "train one model and write model.json, history.csv, metrics.csv");
  add_data_options(*train_cmd, train.data, true);
  train_cmd->add_option("--rules", train.rules, "number of rules P")->capture_default_str()->check(CLI::PositiveNumber);
  train_cmd->add_option("--cscm", train.cscm, "km, wkm, nt or wnt")->capture_default_str()->check(kCscm);
  train_cmd->add_option("--fs-type", train.fs_type, "h or hs")->capture_default_str()->check(kFsType);
  train_cmd->add_option("--firing", train.firing, "prod or htsk2")->capture_default_str()->check(kFiring);
  add_train_options(*train_cmd, train.train);
  train_cmd->add_option("--beta", train.train.beta, "initial beta for wkm / wnt")->check(CLI::Range(0.0, 1.0));
  train_cmd->add_option("--out", train.out, "output directory")->capture_default_str();

  EvalCommand eval;
  auto* eval_cmd = app.add_subcommand("eval", "report RMSE, PICP and PINAW of a saved model on a CSV");
  eval_cmd->add_option("--model", eval.model, "model.json")->required();
  add_data_options(*eval_cmd, eval.data, true);
  eval_cmd->add_option("--out", eval.out, "directory for metrics.csv");

  PredictCommand predict;
  auto* predict_cmd = app.add_subcommand("predict", "write y_crisp, y_lower, y_upper per row in original units");
  predict_cmd->add_option("--model", predict.model, "model.json")->required();
  add_data_options(*predict_cmd, predict.data, true);
  predict_cmd->add_option("--out", predict.out, "output CSV, '-' for standard output")->capture_default_str();

  BenchmarkCommand bench;
  auto* bench_cmd = app.add_subcommand("benchmark", "train every configuration over several seeds");
  add_data_options(*bench_cmd, bench.data, true);
  bench_cmd->add_option("--rules", bench.rules, "number of rules P")->capture_default_str()->check(CLI::PositiveNumber);
  bench_cmd->add_option("--cscm", bench.cscm, "comma-separated subset of km,wkm,nt,wnt")
      ->delimiter(',')
      ->check(kCscm);
  bench_cmd->add_option("--fs-type", bench.fs_type, "comma-separated subset of h,hs")->delimiter(',')->check(kFsType);
  bench_cmd->add_option("--firing", bench.firing, "comma-separated subset of prod,htsk2")
      ->delimiter(',')
      ->check(kFiring);
  add_train_options(*bench_cmd, bench.train);
  bench_cmd->add_option("--seeds", bench.seeds, "runs per configuration, seeds seed..seed+n-1")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  bench_cmd->add_option("--threads", bench.threads, "worker threads (0: one per core)")->capture_default_str();
  bench_cmd->add_option("--out", bench.out, "output directory")->capture_default_str();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    app.exit(e, out, err);
    return kExitOk;
  } catch (const CLI::CallForAllHelp& e) {
    app.exit(e, out, err);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitUsage;
  }

  try {
    if (*train_cmd) return cmd_train(train, out, err);
    if (*eval_cmd) return cmd_eval(eval, out, err);
    if (*predict_cmd) return cmd_predict(predict, out, err);
    if (*bench_cmd) return cmd_benchmark(bench, out, err);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    err << "data error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "data error: " << e.what() << "\n";
    return kExitData;
  }
  return kExitUsage;
}

}  // namespace it2fls::cli
