#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include "quakeloc/cli.hpp"
#include "quakeloc/error.hpp"
#include "quakeloc/text.hpp"

namespace quakeloc::cli {

namespace {

const std::set<std::string, std::less<>> kPathKeys = {
    "out_dir",  "gazetteer", "extended_gazetteer", "source_gazetteer", "source_tweets",
    "tweets",   "keywords",  "templates",          "catalog",          "train_data",
    "model",    "gold",      "pred"};

// Output paths need not exist yet.
const std::set<std::string, std::less<>> kOutputKeys = {"out_dir", "train_data", "model", "gold",
                                                         "pred"};

[[noreturn]] void bad(std::string_view key, const std::string& msg) {
  throw ConfigError(std::string(key) + ": " + msg);
}

template <typename T>
T parse_number(std::string_view key, std::string_view value) {
  T out{};
  auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || ptr != value.data() + value.size()) bad(key, "not a number: '" + std::string(value) + "'");
  return out;
}

bool parse_bool(std::string_view key, std::string_view value) {
  auto v = casefold(value);
  if (v == "true" || v == "1" || v == "yes" || v == "on" || v == "opencage") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  bad(key, "expected off or opencage, got '" + std::string(value) + "'");
}

fs::path input_path(std::string_view key, const std::string& value) {
  fs::path p(value);
  if (!fs::exists(p)) bad(key, "no such file: " + value);
  return p;
}

}  // namespace

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = {
      "out_dir",        "seed",          "gazetteer",    "extended_gazetteer", "source_gazetteer",
      "source_tweets",  "tweets",        "keywords",     "templates",          "catalog",
      "country",        "feature_classes", "corpus_keywords", "locations_limit", "style",
      "mode",           "min_magnitude", "verifier",     "epochs",             "dropout",
      "batch_start",    "batch_stop",    "batch_growth", "learning_rate",      "train_data",
      "model",          "gold",          "pred"};
  return keys;
}

std::map<std::string, std::string> read_config_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open " + path.string());
  auto base = fs::absolute(path).parent_path();
  std::map<std::string, std::string> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    std::string_view body = trim(std::string_view(line).substr(0, hash));
    if (body.empty()) continue;
    auto eq = body.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("config: " + path.string() + ":" + std::to_string(lineno) + ": expected key = value");
    }
    std::string key(trim(body.substr(0, eq)));
    std::string value(trim(body.substr(eq + 1)));
    if (kPathKeys.count(key) && !value.empty() && fs::path(value).is_relative()) {
      value = (base / value).lexically_normal().string();
    }
    out[key] = value;
  }
  return out;
}

PipelineConfig make_config(const std::vector<std::map<std::string, std::string>>& layers) {
  std::map<std::string, std::string> raw;
  for (const auto& layer : layers) {
    for (const auto& [k, v] : layer) raw[k] = v;
  }
  const auto& known = config_keys();
  PipelineConfig cfg;
  for (const auto& [key, value] : raw) {
    if (std::find(known.begin(), known.end(), key) == known.end()) bad(key, "unknown key");
    if (value.empty()) bad(key, "empty value");
    if (kPathKeys.count(key)) {
      fs::path p = kOutputKeys.count(key) ? fs::path(value) : input_path(key, value);
      if (key == "out_dir") cfg.out_dir = p;
      else if (key == "gazetteer") cfg.gazetteer = p;
      else if (key == "extended_gazetteer") cfg.extended_gazetteer = p;
      else if (key == "source_gazetteer") cfg.source_gazetteer = p;
      else if (key == "source_tweets") cfg.source_tweets = p;
      else if (key == "tweets") cfg.tweets = p;
      else if (key == "keywords") cfg.keywords = p;
      else if (key == "templates") cfg.templates = p;
      else if (key == "catalog") cfg.catalog = p;
      else if (key == "train_data") cfg.train_data = p;
      else if (key == "model") cfg.model = p;
      else if (key == "gold") cfg.gold = p;
      else if (key == "pred") cfg.pred = p;
    } else if (key == "seed") {
      cfg.seed = parse_number<std::uint64_t>(key, value);
    } else if (key == "country") {
      if (value.size() != 2) bad(key, "expected a two-letter country code");
      std::string cc = value;
      for (auto& c : cc) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
      cfg.country = cc;
    } else if (key == "feature_classes") {
      std::string classes;
      for (char c : value) {
        if (c == ',' || c == ' ') continue;
        if (!std::isalpha(static_cast<unsigned char>(c))) bad(key, "expected feature class letters");
        classes.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
      }
      if (classes.empty()) bad(key, "expected feature class letters");
      cfg.feature_classes = classes;
    } else if (key == "corpus_keywords") {
      cfg.corpus_keywords.clear();
      for (const auto& kw : split(value, ',')) {
        auto t = trim(kw);
        if (!t.empty()) cfg.corpus_keywords.push_back(casefold(t));
      }
    } else if (key == "locations_limit") {
      cfg.locations_limit = parse_number<std::size_t>(key, value);
    } else if (key == "style") {
      if (value == "template") cfg.style = DatasetStyle::kTemplate;
      else if (value == "realistic") cfg.style = DatasetStyle::kRealistic;
      else bad(key, "expected template or realistic, got '" + value + "'");
    } else if (key == "mode") {
      if (value == "model") cfg.mode = TagMode::kModel;
      else if (value == "gazetteer") cfg.mode = TagMode::kGazetteer;
      else bad(key, "expected model or gazetteer, got '" + value + "'");
    } else if (key == "min_magnitude") {
      cfg.min_magnitude = parse_number<double>(key, value);
    } else if (key == "verifier") {
      cfg.verifier = parse_bool(key, value);
    } else if (key == "epochs") {
      cfg.hyperparams.epochs = parse_number<int>(key, value);
    } else if (key == "dropout") {
      cfg.hyperparams.dropout = parse_number<double>(key, value);
    } else if (key == "batch_start") {
      cfg.hyperparams.batch_start = parse_number<std::size_t>(key, value);
    } else if (key == "batch_stop") {
      cfg.hyperparams.batch_stop = parse_number<std::size_t>(key, value);
    } else if (key == "batch_growth") {
      cfg.hyperparams.batch_growth = parse_number<double>(key, value);
    } else if (key == "learning_rate") {
      cfg.hyperparams.learning_rate = parse_number<double>(key, value);
    }
  }
  cfg.hyperparams.seed = cfg.seed;
  cfg.hyperparams.validate();
  return cfg;
}

}  // namespace quakeloc::cli
