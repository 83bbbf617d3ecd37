#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "quakeloc/tagger.hpp"

namespace quakeloc::cli {

namespace fs = std::filesystem;

enum class DatasetStyle { kTemplate, kRealistic };
enum class TagMode { kModel, kGazetteer };

struct PipelineConfig {
  fs::path out_dir = "quakeloc-out";
  std::uint64_t seed = 0;

  // inputs
  std::optional<fs::path> gazetteer;           // GeoNames dump for J
  std::optional<fs::path> extended_gazetteer;  // merged into L for gold tagging and geocoding
  std::optional<fs::path> source_gazetteer;    // validates source-event hashtags
  std::optional<fs::path> source_tweets;
  std::optional<fs::path> tweets;
  std::optional<fs::path> keywords;
  std::optional<fs::path> templates;
  std::optional<fs::path> catalog;

  std::optional<std::string> country;  // ISO alpha-2
  std::string feature_classes = "P";
  std::vector<std::string> corpus_keywords;
  std::size_t locations_limit = 0;  // 0 keeps every name

  DatasetStyle style = DatasetStyle::kRealistic;
  TagMode mode = TagMode::kModel;
  double min_magnitude = 7.0;
  bool verifier = false;

  Hyperparams hyperparams;

  // stage artifacts that can be redirected
  std::optional<fs::path> train_data;
  std::optional<fs::path> model;
  std::optional<fs::path> gold;
  std::optional<fs::path> pred;
};

// Keys accepted in a config file or through --set.
const std::vector<std::string>& config_keys();

// Parses "key = value" lines ('#' starts a comment). Relative paths in the
// file resolve against the file's directory. Throws ConfigError naming the
// offending key.
std::map<std::string, std::string> read_config_file(const fs::path& path);

// Builds and validates a config from raw values. Later maps override
// earlier ones. Throws ConfigError.
PipelineConfig make_config(const std::vector<std::map<std::string, std::string>>& layers);

// Entry point shared by the quakeloc binary and the tests. Returns the
// process exit status: 0 success, 1 stage failure, 2 invalid configuration
// or usage.
int run(const std::vector<std::string>& args);
int run(int argc, char** argv);

}  // namespace quakeloc::cli
