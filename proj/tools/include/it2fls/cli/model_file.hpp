#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "it2fls/it2fls.hpp"

namespace it2fls::cli {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

/// Everything needed to reproduce predictions: the architecture, the raw
/// parameters, how the data was normalized, and echoes of the training run.
struct ModelFile {
  Model model;
  std::vector<std::string> feature_names;
  std::string target_name;
  std::optional<NormStats> norm_stats;
  Json train_config = Json::object();
  Json metrics = Json::object();
};

class ModelFileError : public Error {
 public:
  using Error::Error;
};

Json to_json(const ModelFile& file);
ModelFile from_json(const Json& j);

/// Serialized with two-space indentation and a trailing newline. Equal models
/// produce byte-identical files.
std::string dump(const ModelFile& file);
void save(const std::filesystem::path& path, const ModelFile& file);
ModelFile load(const std::filesystem::path& path);

}  // namespace it2fls::cli
