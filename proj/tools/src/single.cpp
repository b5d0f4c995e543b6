// train, eval and predict: the commands that work on a single model.

#include <filesystem>
#include <fstream>
#include <numeric>
#include <ostream>

#include "commands.hpp"
#include "format.hpp"
#include "it2fls/cli/app.hpp"

namespace it2fls::cli {

namespace {

Json report_json(const MetricsReport& r, double target_std) {
  auto n = [](double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); };
  return {{"n_samples", r.n_samples},   {"rmse_x100", n(100 * r.rmse)}, {"picp", n(r.picp)},
          {"pinaw_x100", n(100 * r.pinaw)}, {"rmse_original", n(r.rmse * target_std)},
          {"f2t", r.f2t},               {"fpi", r.fpi}};
}

const CsvRow kMetricsHeader{"split", "n_samples", "rmse_x100", "picp", "pinaw_x100", "rmse_original", "f2t", "fpi"};

CsvRow report_row(const std::string& split, const MetricsReport& r, double target_std) {
  return {split,         std::to_string(r.n_samples), num(100 * r.rmse), num(r.picp), num(100 * r.pinaw),
          num(r.rmse * target_std), r.f2t ? "1" : "0", r.fpi ? "1" : "0"};
}

void print_reports(std::ostream& out, const std::vector<std::pair<std::string, MetricsReport>>& rows,
                   double target_std) {
  out << pad("split", 8) << pad("n", 8) << pad("RMSE(x100)", 12) << pad("PICP", 10) << pad("PINAW(x100)", 13)
      << "RMSE(orig)\n";
  for (const auto& [name, r] : rows) {
    out << pad(name, 8) << pad(std::to_string(r.n_samples), 8) << pad(fixed(100 * r.rmse, 4), 12)
        << pad(fixed(r.picp, 4), 10) << pad(fixed(100 * r.pinaw, 4), 13) << fixed(r.rmse * target_std, 4) << "\n";
  }
}

std::string status(const MetricsReport& r) { return r.f2t ? "F2T" : r.fpi ? "FPI" : "ok"; }

int exit_for(const MetricsReport& r) {
  return r.f2t ? kExitFailedToTrain : r.fpi ? kExitFailedInterval : kExitOk;
}

std::filesystem::path ensure_dir(const std::string& dir) {
  std::filesystem::path p(dir);
  std::filesystem::create_directories(p);
  return p;
}

Architecture parse_arch(std::size_t rules, std::size_t inputs, const std::string& cscm, const std::string& fs,
                        const std::string& firing) {
  try {
    return {rules, inputs, parse_fs_type(fs), parse_firing_mode(firing), parse_cscm(cscm)};
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
}

}  // namespace

int cmd_train(const TrainCommand& cmd, std::ostream& out, std::ostream& err) {
  if (cmd.rules == 0) throw UsageError("--rules must be at least 1");
  const auto cscm = parse_arch(cmd.rules, 1, cmd.cscm, cmd.fs_type, cmd.firing).cscm;
  const auto config = make_train_config(cmd.train, cscm);

  const auto raw = load_csv(cmd.data.path, {cmd.data.target, cmd.data.delimiter});
  warn_constant_columns(raw, err);
  const auto arch = parse_arch(cmd.rules, raw.inputs(), cmd.cscm, cmd.fs_type, cmd.firing);
  const auto data = prepare(raw, cmd.train.split, config.seed, cmd.train.normalize);
  const auto run = run_once(arch, config, data);
  const double tstd = data.stats.target_std;

  const auto dir = ensure_dir(cmd.out);

  ModelFile file;
  file.model = run.result.model;
  file.feature_names = raw.feature_names;
  file.target_name = raw.target_name;
  file.norm_stats = data.stats;
  file.train_config = config_echo(cmd.data, cmd.train, config);
  file.metrics["status"] = status(run.test_report);
  file.metrics["best_epoch"] = run.result.best_epoch ? Json(*run.result.best_epoch + 1) : Json(nullptr);
  file.metrics["train"] = report_json(run.train_report, tstd);
  file.metrics["test"] = report_json(run.test_report, tstd);
  save(dir / "model.json", file);

  // Mean mini-batch loss per epoch next to the full training loss at its end.
  std::vector<CsvRow> history;
  const auto steps_per_epoch = (data.train.size() + config.minibatch_size - 1) / config.minibatch_size;
  const auto& steps = run.result.step_losses;
  for (std::size_t e = 0; e < run.result.epoch_losses.size(); ++e) {
    const auto first = std::min(steps.size(), e * steps_per_epoch);
    const auto last = std::min(steps.size(), first + steps_per_epoch);
    const double mean = std::accumulate(steps.begin() + first, steps.begin() + last, 0.0) /
                        static_cast<double>(std::max<std::size_t>(1, last - first));
    history.push_back({std::to_string(e + 1), num(mean), num(run.result.epoch_losses[e])});
  }
  write_csv(dir / "history.csv", {"epoch", "mean_batch_loss", "train_loss"}, history);
  write_csv(dir / "metrics.csv", kMetricsHeader,
            {report_row("train", run.train_report, tstd), report_row("test", run.test_report, tstd)});

  out << "model: P=" << arch.rules << " M=" << arch.inputs << " " << to_string(arch.fs_type) << " "
      << to_string(arch.firing_mode) << " " << to_string(arch.cscm) << ", " << parameter_count(arch)
      << " learnable parameters\n";
  out << "trained " << run.result.epoch_losses.size() << " of " << config.epochs << " epochs";
  if (run.result.best_epoch)
    out << ", best epoch " << *run.result.best_epoch + 1 << " (train loss "
        << fixed(run.result.epoch_losses[*run.result.best_epoch], 6) << ")";
  out << "\n";
  print_reports(out, {{"train", run.train_report}, {"test", run.test_report}}, tstd);
  out << "status: " << status(run.test_report) << "\n";
  if (run.test_report.f2t) err << "training failed: non-finite parameters or training-set outputs (F2T)\n";
  else if (run.test_report.fpi) err << "failed prediction interval: test PICP <= 50 (FPI)\n";
  return exit_for(run.test_report);
}

int cmd_eval(const EvalCommand& cmd, std::ostream& out, std::ostream& err) {
  const auto file = load(cmd.model);
  auto data = load_for_model(cmd.data, file, true, err);
  const auto stats = file.norm_stats.value_or(
      NormStats{std::vector<double>(data.inputs(), 0.0), std::vector<double>(data.inputs(), 1.0), 0.0, 1.0});
  data = zscore_apply(stats, data);

  const auto preds = predict_all(data.features, file.model.system());
  auto report = evaluate(data.targets, preds);
  const auto flags = detect_failures(!all_finite(file.model.raw), preds, report);
  report.f2t = flags.f2t;
  report.fpi = flags.fpi;

  print_reports(out, {{"eval", report}}, stats.target_std);
  out << "status: " << status(report) << "\n";
  if (!cmd.out.empty()) {
    write_csv(ensure_dir(cmd.out) / "metrics.csv", kMetricsHeader, {report_row("eval", report, stats.target_std)});
  }
  if (report.f2t) err << "model produces non-finite outputs\n";
  else if (report.fpi) err << "failed prediction interval: PICP <= 50 (FPI)\n";
  return exit_for(report);
}

int cmd_predict(const PredictCommand& cmd, std::ostream& out, std::ostream& err) {
  const auto file = load(cmd.model);
  auto data = load_for_model(cmd.data, file, false, err);
  if (file.norm_stats) data = zscore_apply(*file.norm_stats, data);
  const auto preds = predict_all(data.features, file.model.system());

  std::vector<CsvRow> rows;
  rows.reserve(preds.size());
  for (auto p : preds) {
    if (file.norm_stats) {
      p.y_crisp = zscore_invert_target(*file.norm_stats, p.y_crisp);
      p.y_lower = zscore_invert_target(*file.norm_stats, p.y_lower);
      p.y_upper = zscore_invert_target(*file.norm_stats, p.y_upper);
    }
    rows.push_back({num(p.y_crisp), num(p.y_lower), num(p.y_upper)});
  }
  const CsvRow header{"y_crisp", "y_lower", "y_upper"};
  if (cmd.out == "-") {
    for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
    out << "\n";
    for (const auto& r : rows) out << r[0] << "," << r[1] << "," << r[2] << "\n";
  } else {
    const std::filesystem::path p(cmd.out);
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
    write_csv(p, header, rows);
  }
  return kExitOk;
}

}  // namespace it2fls::cli
