#include <algorithm>
#include <charconv>
#include <ostream>

#include "commands.hpp"

namespace it2fls::cli {

Quantiles parse_quantiles(const std::string& text) {
  const auto comma = text.find(',');
  if (comma == std::string::npos) throw UsageError("--quantiles expects two values 'lower,upper'");
  auto parse = [&](std::string_view s) {
    while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
    while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || s.empty())
      throw UsageError("--quantiles: cannot parse '" + std::string(s) + "'");
    return v;
  };
  const std::string_view all(text);
  Quantiles q{parse(all.substr(0, comma)), parse(all.substr(comma + 1))};
  try {
    validate(q);
  } catch (const std::invalid_argument& e) {
    throw UsageError(std::string("--quantiles: ") + e.what());
  }
  return q;
}

TrainConfig make_train_config(const TrainOptions& opts, Cscm cscm) {
  TrainConfig c;
  c.epochs = opts.epochs;
  c.minibatch_size = opts.minibatch_size;
  c.learning_rate = opts.learning_rate;
  c.quantiles = parse_quantiles(opts.quantiles);
  c.seed = opts.seed;
  if (opts.beta) {
    if (!has_beta(cscm))
      throw UsageError("--beta only applies to wkm and wnt; " + std::string(to_string(cscm)) + " has no beta");
    c.initial_beta = opts.beta;
  }
  if (!(opts.split > 0.0 && opts.split < 1.0)) throw UsageError("--split must lie strictly between 0 and 1");
  if (opts.normalize != "train" && opts.normalize != "full") throw UsageError("--normalize must be train or full");
  try {
    validate(c);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  return c;
}

Json config_echo(const DataOptions& data, const TrainOptions& opts, const TrainConfig& config) {
  Json j;
  j["data"] = data.path;
  j["target"] = data.target;
  j["split"] = opts.split;
  j["normalize"] = opts.normalize;
  j["seed"] = config.seed;
  j["epochs"] = config.epochs;
  j["minibatch_size"] = config.minibatch_size;
  j["learning_rate"] = config.learning_rate;
  j["quantiles"] = {config.quantiles.lower, config.quantiles.upper};
  j["adam"] = {{"beta1", config.adam_beta1}, {"beta2", config.adam_beta2}, {"epsilon", config.adam_epsilon}};
  j["initial_beta"] = config.initial_beta ? Json(*config.initial_beta) : Json(nullptr);
  j["loss_terms"] = {{"accuracy", config.terms.accuracy}, {"lower", config.terms.lower}, {"upper", config.terms.upper}};
  return j;
}

PreparedData prepare(const Dataset& raw, double train_fraction, std::uint64_t seed, const std::string& normalize) {
  PreparedData out;
  if (normalize == "full") {
    out.stats = zscore_fit(raw);
    auto sp = split(zscore_apply(out.stats, raw), train_fraction, seed);
    out.train = std::move(sp.train);
    out.test = std::move(sp.test);
  } else {
    auto sp = split(raw, train_fraction, seed);
    out.stats = zscore_fit(sp.train);
    out.train = zscore_apply(out.stats, sp.train);
    out.test = zscore_apply(out.stats, sp.test);
  }
  if (out.test.size() == 0)
    throw EmptyDataset("the test split is empty; lower --split or provide more rows");
  return out;
}

RunOutcome run_once(const Architecture& arch, const TrainConfig& config, const PreparedData& data) {
  RunOutcome r;
  r.result = train(data.train, config, arch);
  const auto sys = r.result.model.system();
  const auto train_pred = predict_all(data.train.features, sys);
  const auto test_pred = predict_all(data.test.features, sys);
  r.train_report = evaluate(data.train.targets, train_pred);
  r.test_report = evaluate(data.test.targets, test_pred);
  const auto flags = detect_failures(!all_finite(r.result.model.raw), train_pred, r.test_report);
  r.test_report.f2t = r.train_report.f2t = flags.f2t;
  r.test_report.fpi = flags.fpi;
  return r;
}

Dataset load_for_model(const DataOptions& data, const ModelFile& model, bool require_target, std::ostream& err) {
  const auto m = model.model.arch.inputs;
  CsvOptions opts;
  opts.delimiter = data.delimiter;
  opts.has_target = false;
  const auto all = load_csv(data.path, opts);
  const auto& names = all.feature_names;

  Dataset d;
  if (!data.target.empty()) {
    opts.has_target = true;
    opts.target = data.target;
    d = load_csv(data.path, opts);
  } else if (!require_target && names.size() == m) {
    d = all;
  } else {
    opts.has_target = true;
    if (std::find(names.begin(), names.end(), model.target_name) != names.end()) opts.target = model.target_name;
    d = load_csv(data.path, opts);
  }
  if (d.inputs() != m) {
    throw ShapeMismatch("'" + data.path + "' has " + std::to_string(d.inputs()) + " feature columns, the model expects " +
                        std::to_string(m));
  }
  if (!model.feature_names.empty() && d.feature_names != model.feature_names)
    err << "warning: feature column names differ from the ones the model was trained on\n";
  return d;
}

void warn_constant_columns(const Dataset& data, std::ostream& err) {
  for (const auto& name : constant_columns(data)) err << "warning: column '" << name << "' is constant\n";
}

}  // namespace it2fls::cli
