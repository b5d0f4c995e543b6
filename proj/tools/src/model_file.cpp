#include "it2fls/cli/model_file.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace it2fls::cli {

namespace {

// JSON has no NaN or infinity; non-finite values are stored as null and read
// back as NaN, which keeps diverged models inspectable.
Json number(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

double read_number(const Json& j) {
  if (j.is_null()) return std::numeric_limits<double>::quiet_NaN();
  if (!j.is_number()) throw ModelFileError("expected a number, got " + j.dump());
  return j.get<double>();
}

Json array(std::span<const double> values) {
  Json out = Json::array();
  for (double v : values) out.push_back(number(v));
  return out;
}

std::vector<double> read_array(const Json& j, const char* what) {
  if (!j.is_array()) throw ModelFileError(std::string(what) + " must be an array");
  std::vector<double> out;
  out.reserve(j.size());
  for (const auto& v : j) out.push_back(read_number(v));
  return out;
}

Json tensor(const Matrix& m) {
  Json out;
  out["shape"] = {m.rows(), m.cols()};
  out["values"] = array(m.values());
  return out;
}

Json tensor(const std::vector<double>& v) {
  Json out;
  out["shape"] = {v.size()};
  out["values"] = array(v);
  return out;
}

const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw ModelFileError(std::string("missing field '") + key + "'");
  return j.at(key);
}

void read_tensor(const Json& parent, const char* key, Matrix& into) {
  const auto& t = field(parent, key);
  const auto shape = field(t, "shape");
  if (!shape.is_array() || shape.size() != 2) throw ModelFileError(std::string(key) + ": shape must have two entries");
  const auto rows = shape[0].get<std::size_t>();
  const auto cols = shape[1].get<std::size_t>();
  if (rows != into.rows() || cols != into.cols())
    throw ModelFileError(std::string(key) + ": shape does not match the architecture");
  const auto values = read_array(field(t, "values"), key);
  if (values.size() != rows * cols) throw ModelFileError(std::string(key) + ": value count does not match shape");
  std::copy(values.begin(), values.end(), into.values().begin());
}

void read_tensor(const Json& parent, const char* key, std::vector<double>& into) {
  const auto& t = field(parent, key);
  const auto shape = field(t, "shape");
  if (!shape.is_array() || shape.size() != 1 || shape[0].get<std::size_t>() != into.size())
    throw ModelFileError(std::string(key) + ": shape does not match the architecture");
  auto values = read_array(field(t, "values"), key);
  if (values.size() != into.size()) throw ModelFileError(std::string(key) + ": value count does not match shape");
  into = std::move(values);
}

}  // namespace

Json to_json(const ModelFile& file) {
  const auto& arch = file.model.arch;
  const auto& raw = file.model.raw;
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["architecture"] = {{"rules", arch.rules},
                       {"inputs", arch.inputs},
                       {"fs_type", to_string(arch.fs_type)},
                       {"firing_mode", to_string(arch.firing_mode)},
                       {"cscm", to_string(arch.cscm)}};
  j["feature_names"] = file.feature_names;
  j["target_name"] = file.target_name;

  Json params;
  params["count"] = parameter_count(arch);
  params["c_raw"] = tensor(raw.c_raw);
  params["su_raw"] = tensor(raw.su_raw);
  if (arch.fs_type == FsType::HS) params["sl_raw"] = tensor(raw.sl_raw);
  params["h_raw"] = tensor(raw.h_raw);
  params["a"] = tensor(raw.a);
  params["a0"] = tensor(raw.a0);
  if (raw.beta_raw) params["beta_raw"] = number(*raw.beta_raw);
  j["raw_parameters"] = std::move(params);

  if (file.norm_stats) {
    const auto& s = *file.norm_stats;
    j["norm_stats"] = {{"feature_mean", array(s.feature_mean)},
                       {"feature_std", array(s.feature_std)},
                       {"target_mean", number(s.target_mean)},
                       {"target_std", number(s.target_std)}};
  } else {
    j["norm_stats"] = nullptr;
  }
  j["train_config"] = file.train_config;
  j["metrics"] = file.metrics;
  return j;
}

ModelFile from_json(const Json& j) {
  try {
    const int version = field(j, "schema_version").get<int>();
    if (version != kSchemaVersion)
      throw ModelFileError("unsupported schema_version " + std::to_string(version) + " (expected " +
                           std::to_string(kSchemaVersion) + ")");

    const auto& a = field(j, "architecture");
    Architecture arch;
    arch.rules = field(a, "rules").get<std::size_t>();
    arch.inputs = field(a, "inputs").get<std::size_t>();
    arch.fs_type = parse_fs_type(field(a, "fs_type").get<std::string>());
    arch.firing_mode = parse_firing_mode(field(a, "firing_mode").get<std::string>());
    arch.cscm = parse_cscm(field(a, "cscm").get<std::string>());
    if (arch.rules == 0 || arch.inputs == 0) throw ModelFileError("architecture needs at least one rule and input");

    ModelFile file;
    file.model = Model{arch, make_raw_params(arch)};
    auto& raw = file.model.raw;
    const auto& p = field(j, "raw_parameters");
    read_tensor(p, "c_raw", raw.c_raw);
    read_tensor(p, "su_raw", raw.su_raw);
    if (arch.fs_type == FsType::HS) read_tensor(p, "sl_raw", raw.sl_raw);
    read_tensor(p, "h_raw", raw.h_raw);
    read_tensor(p, "a", raw.a);
    read_tensor(p, "a0", raw.a0);
    if (raw.beta_raw) raw.beta_raw = read_number(field(p, "beta_raw"));
    if (p.contains("count") && p.at("count").get<std::size_t>() != parameter_count(arch))
      throw ModelFileError("parameter count does not match the architecture");

    if (j.contains("feature_names")) file.feature_names = j.at("feature_names").get<std::vector<std::string>>();
    if (j.contains("target_name")) file.target_name = j.at("target_name").get<std::string>();

    if (j.contains("norm_stats") && !j.at("norm_stats").is_null()) {
      const auto& s = j.at("norm_stats");
      NormStats stats;
      stats.feature_mean = read_array(field(s, "feature_mean"), "feature_mean");
      stats.feature_std = read_array(field(s, "feature_std"), "feature_std");
      stats.target_mean = read_number(field(s, "target_mean"));
      stats.target_std = read_number(field(s, "target_std"));
      if (stats.feature_mean.size() != arch.inputs || stats.feature_std.size() != arch.inputs)
        throw ModelFileError("norm_stats width does not match the architecture");
      file.norm_stats = std::move(stats);
    }
    if (j.contains("train_config")) file.train_config = j.at("train_config");
    if (j.contains("metrics")) file.metrics = j.at("metrics");
    return file;
  } catch (const Json::exception& e) {
    throw ModelFileError(std::string("malformed model file: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw ModelFileError(std::string("malformed model file: ") + e.what());
  }
}

std::string dump(const ModelFile& file) { return to_json(file).dump(2) + "\n"; }

void save(const std::filesystem::path& path, const ModelFile& file) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  out << dump(file);
  if (!out) throw Error("failed while writing '" + path.string() + "'");
}

ModelFile load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  Json j;
  try {
    j = Json::parse(buf.str());
  } catch (const Json::exception& e) {
    throw ModelFileError("'" + path.string() + "' is not valid JSON: " + e.what());
  }
  return from_json(j);
}

}  // namespace it2fls::cli
