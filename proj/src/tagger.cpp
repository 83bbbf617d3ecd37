#include "quakeloc/tagger.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include "json.hpp"
#include "quakeloc/error.hpp"
#include "quakeloc/fingerprint.hpp"
#include "quakeloc/text.hpp"

namespace quakeloc {

using nlohmann::json;

namespace {

constexpr std::array<std::string_view, kNumLabels> kLabelNames = {"O", "B-GPE", "I-GPE",
                                                                  "B-DISASTER", "I-DISASTER"};
constexpr std::string_view kModelFormat = "quakeloc-tagger";
constexpr int kModelVersion = 1;

bool is_token_char(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '\'';
}

std::string word_shape(std::string_view token) {
  std::string shape;
  for (char c : token) {
    char s = (c >= 'A' && c <= 'Z') ? 'X' : (c >= 'a' && c <= 'z') ? 'x' : (c >= '0' && c <= '9') ? 'd' : c;
    if (shape.empty() || shape.back() != s) shape.push_back(s);
  }
  return shape;
}

bool is_title(std::string_view token) {
  if (token.empty() || !(token[0] >= 'A' && token[0] <= 'Z')) return false;
  return std::none_of(token.begin() + 1, token.end(), [](char c) { return c >= 'A' && c <= 'Z'; });
}

std::optional<EntityLabel> entity_of(BioLabel l) {
  switch (l) {
    case BioLabel::kBGpe:
    case BioLabel::kIGpe:
      return EntityLabel::kGpe;
    case BioLabel::kBDisaster:
    case BioLabel::kIDisaster:
      return EntityLabel::kDisaster;
    default:
      return std::nullopt;
  }
}

bool is_inside(BioLabel l) { return l == BioLabel::kIGpe || l == BioLabel::kIDisaster; }

BioLabel begin_of(EntityLabel e) {
  return e == EntityLabel::kGpe ? BioLabel::kBGpe : BioLabel::kBDisaster;
}
BioLabel inside_of(EntityLabel e) {
  return e == EntityLabel::kGpe ? BioLabel::kIGpe : BioLabel::kIDisaster;
}

double unit_uniform(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::string hyperparams_summary(const Hyperparams& hp) {
  std::ostringstream os;
  os << "epochs=" << hp.epochs << " dropout=" << hp.dropout << " batch=" << hp.batch_start << ".."
     << hp.batch_stop << "x" << hp.batch_growth << " lr=" << hp.learning_rate << " seed=" << hp.seed;
  return os.str();
}

}  // namespace

std::vector<Token> tokenize(std::string_view text) {
  std::vector<Token> tokens;
  std::size_t i = 0;
  while (i < text.size()) {
    if (!is_token_char(text[i])) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < text.size() && is_token_char(text[j])) ++j;
    tokens.push_back({std::string(text.substr(i, j - i)), i, j});
    i = j;
  }
  return tokens;
}

std::string_view bio_name(BioLabel label) { return kLabelNames[static_cast<std::size_t>(label)]; }

std::optional<BioLabel> parse_bio(std::string_view name) {
  for (std::size_t i = 0; i < kNumLabels; ++i) {
    if (kLabelNames[i] == name) return kAllLabels[i];
  }
  return std::nullopt;
}

std::vector<BioLabel> spans_to_bio(std::span<const Token> tokens, std::span<const EntitySpan> spans) {
  std::vector<BioLabel> labels(tokens.size(), BioLabel::kO);
  std::vector<bool> taken(tokens.size(), false);
  for (const auto& s : spans) {
    bool first = true;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
      if (tokens[i].end <= s.start || tokens[i].start >= s.end || taken[i]) continue;
      labels[i] = first ? begin_of(s.label) : inside_of(s.label);
      taken[i] = true;
      first = false;
    }
  }
  return labels;
}

std::vector<EntitySpan> bio_to_spans(std::span<const Token> tokens, std::span<const BioLabel> labels) {
  std::vector<EntitySpan> spans;
  std::optional<EntityLabel> open;
  for (std::size_t i = 0; i < tokens.size() && i < labels.size(); ++i) {
    auto entity = entity_of(labels[i]);
    if (!entity) {
      open.reset();
      continue;
    }
    if (is_inside(labels[i]) && open == entity) {
      spans.back().end = tokens[i].end;
    } else {
      spans.push_back({tokens[i].start, tokens[i].end, *entity});
      open = entity;
    }
  }
  return spans;
}

std::vector<std::string> static_features(std::span<const Token> tokens, std::size_t i) {
  const auto lower = casefold(tokens[i].text);
  std::vector<std::string> f;
  f.reserve(14);
  f.emplace_back("bias");
  f.push_back("w=" + lower);
  for (std::size_t n = 1; n <= 3 && n <= lower.size(); ++n) {
    f.push_back("p" + std::to_string(n) + "=" + lower.substr(0, n));
  }
  for (std::size_t n = 1; n <= 3 && n <= lower.size(); ++n) {
    f.push_back("s" + std::to_string(n) + "=" + lower.substr(lower.size() - n));
  }
  f.push_back("shape=" + word_shape(tokens[i].text));
  if (is_title(tokens[i].text)) f.emplace_back("title");
  f.push_back("prev=" + (i == 0 ? std::string("<s>") : casefold(tokens[i - 1].text)));
  f.push_back("next=" + (i + 1 == tokens.size() ? std::string("</s>") : casefold(tokens[i + 1].text)));
  return f;
}

std::string prev_label_feature(std::optional<BioLabel> prev_label) {
  return "plabel=" + (prev_label ? std::string(bio_name(*prev_label)) : std::string("<START>"));
}

std::vector<std::string> features(std::span<const Token> tokens, std::size_t i,
                                  std::optional<BioLabel> prev_label) {
  auto f = static_features(tokens, i);
  f.push_back(prev_label_feature(prev_label));
  return f;
}

void Hyperparams::validate() const {
  if (epochs <= 0) throw ConfigError("epochs must be positive");
  if (!(dropout >= 0.0 && dropout < 1.0)) throw ConfigError("dropout must lie in [0, 1)");
  if (batch_start == 0 || batch_stop == 0) throw ConfigError("batch sizes must be positive");
  if (batch_start > batch_stop) throw ConfigError("batch_start must not exceed batch_stop");
  if (!(batch_growth >= 1.0) || !std::isfinite(batch_growth)) {
    throw ConfigError("batch_growth must be a finite ratio >= 1");
  }
  if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) {
    throw ConfigError("learning_rate must be positive");
  }
}

std::size_t batch_size(const Hyperparams& hp, std::size_t k) {
  double size = static_cast<double>(hp.batch_start) * std::pow(hp.batch_growth, static_cast<double>(k));
  if (!(size < static_cast<double>(hp.batch_stop))) return hp.batch_stop;
  return std::max<std::size_t>(1, static_cast<std::size_t>(std::floor(size)));
}

std::vector<std::size_t> training_order(std::size_t n, std::uint64_t seed, int epoch) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(epoch), 0x5eedu};
  std::mt19937_64 rng(seq);
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  for (std::size_t i = n; i > 1; --i) {
    std::size_t j = static_cast<std::size_t>(rng() % i);
    std::swap(order[i - 1], order[j]);
  }
  return order;
}

BioLabel best_label(const LabelWeights& scores) {
  std::size_t best = 0;
  for (std::size_t l = 1; l < kNumLabels; ++l) {
    if (scores[l] > scores[best]) best = l;
  }
  return kAllLabels[best];
}

TaggerModel::TaggerModel(std::vector<std::string> feature_names, std::vector<LabelWeights> weights,
                         TrainingMeta meta)
    : features_(std::move(feature_names)), weights_(std::move(weights)), meta_(std::move(meta)) {
  if (features_.size() != weights_.size()) throw Error("model feature/weight size mismatch");
  index_.reserve(features_.size());
  for (std::size_t i = 0; i < features_.size(); ++i) {
    for (double w : weights_[i]) {
      if (!std::isfinite(w)) throw Error("non-finite weight for feature " + features_[i]);
    }
    if (!index_.emplace(features_[i], i).second) throw Error("duplicate model feature " + features_[i]);
  }
}

double TaggerModel::weight(std::string_view feature, BioLabel label) const {
  auto it = index_.find(std::string(feature));
  return it == index_.end() ? 0.0 : weights_[it->second][static_cast<std::size_t>(label)];
}

std::vector<BioLabel> TaggerModel::predict_labels(std::span<const Token> tokens) const {
  std::vector<BioLabel> labels;
  labels.reserve(tokens.size());
  std::optional<BioLabel> prev;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    LabelWeights scores{};
    for (const auto& f : features(tokens, i, prev)) {
      auto it = index_.find(f);
      if (it == index_.end()) continue;
      const auto& w = weights_[it->second];
      for (std::size_t l = 0; l < kNumLabels; ++l) scores[l] += w[l];
    }
    auto label = best_label(scores);
    labels.push_back(label);
    prev = label;
  }
  return labels;
}

std::vector<EntitySpan> TaggerModel::predict(std::string_view text) const {
  auto tokens = tokenize(text);
  auto labels = predict_labels(tokens);
  return bio_to_spans(tokens, labels);
}

std::string TaggerModel::serialize() const {
  json meta = {
      {"hyperparams",
       {{"epochs", meta_.hyperparams.epochs},
        {"dropout", meta_.hyperparams.dropout},
        {"batch_start", meta_.hyperparams.batch_start},
        {"batch_stop", meta_.hyperparams.batch_stop},
        {"batch_growth", meta_.hyperparams.batch_growth},
        {"learning_rate", meta_.hyperparams.learning_rate},
        {"seed", meta_.hyperparams.seed}}},
      {"seed", meta_.hyperparams.seed},
      {"dataset_fingerprint", meta_.dataset_fingerprint},
      {"examples", meta_.examples},
      {"tokens", meta_.tokens},
      {"updates", meta_.updates},
      {"epoch_loss", meta_.epoch_loss},
  };
  json weights = json::object();
  for (std::size_t i = 0; i < features_.size(); ++i) {
    for (std::size_t l = 0; l < kNumLabels; ++l) {
      if (weights_[i][l] != 0.0) {
        weights[features_[i] + '\0' + std::string(kLabelNames[l])] = weights_[i][l];
      }
    }
  }
  json doc = {{"format", kModelFormat},
              {"version", kModelVersion},
              {"labels", kLabelNames},
              {"meta", std::move(meta)},
              {"weights", std::move(weights)}};
  return doc.dump(1) + "\n";
}

TaggerModel TaggerModel::deserialize(std::string_view bytes) {
  json doc;
  try {
    doc = json::parse(bytes);
  } catch (const json::parse_error& e) {
    throw Error(std::string("model file is not valid JSON: ") + e.what());
  }
  try {
    if (doc.at("format").get<std::string>() != kModelFormat) throw Error("not a quakeloc model file");
    if (doc.at("version").get<int>() != kModelVersion) throw Error("unsupported model version");

    TrainingMeta meta;
    const auto& m = doc.at("meta");
    const auto& h = m.at("hyperparams");
    meta.hyperparams.epochs = h.at("epochs").get<int>();
    meta.hyperparams.dropout = h.at("dropout").get<double>();
    meta.hyperparams.batch_start = h.at("batch_start").get<std::size_t>();
    meta.hyperparams.batch_stop = h.at("batch_stop").get<std::size_t>();
    meta.hyperparams.batch_growth = h.at("batch_growth").get<double>();
    meta.hyperparams.learning_rate = h.at("learning_rate").get<double>();
    meta.hyperparams.seed = h.at("seed").get<std::uint64_t>();
    meta.dataset_fingerprint = m.at("dataset_fingerprint").get<std::string>();
    meta.examples = m.at("examples").get<std::size_t>();
    meta.tokens = m.at("tokens").get<std::size_t>();
    meta.updates = m.at("updates").get<std::size_t>();
    meta.epoch_loss = m.at("epoch_loss").get<std::vector<double>>();

    std::vector<std::string> names;
    std::vector<LabelWeights> weights;
    for (const auto& [key, value] : doc.at("weights").items()) {
      auto sep = key.find('\0');
      if (sep == std::string::npos) throw Error("weight key without label separator");
      auto label = parse_bio(std::string_view(key).substr(sep + 1));
      if (!label) throw Error("unknown label in weight key");
      auto feature = key.substr(0, sep);
      // keys arrive sorted, so one feature's labels are adjacent
      if (names.empty() || names.back() != feature) {
        names.push_back(feature);
        weights.push_back({});
      }
      weights.back()[static_cast<std::size_t>(*label)] = value.get<double>();
    }
    return TaggerModel(std::move(names), std::move(weights), std::move(meta));
  } catch (const json::exception& e) {
    throw Error(std::string("malformed model file: ") + e.what());
  }
}

void TaggerModel::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write model file " + path.string());
  out << serialize();
}

TaggerModel TaggerModel::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("model file not found: " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return deserialize(buf.str());
}

std::string dataset_fingerprint(std::span<const AnnotatedExample> dataset) {
  std::string all;
  for (const auto& ex : dataset) {
    all += to_jsonl_line(ex);
    all.push_back('\n');
  }
  return sha256_hex(all);
}

namespace {

struct PreparedExample {
  std::vector<std::vector<std::uint32_t>> token_features;  // static features per token
  std::vector<BioLabel> gold;
};

// Lazily averaged parameter: total holds the sum of w over all closed
// snapshot intervals before `stamp`.
struct AveragedParam {
  double w = 0.0;
  double total = 0.0;
  std::size_t stamp = 0;
};

class FeatureInterner {
 public:
  std::uint32_t intern(std::string name) {
    auto [it, inserted] = ids_.try_emplace(std::move(name), static_cast<std::uint32_t>(names_.size()));
    if (inserted) names_.push_back(it->first);
    return it->second;
  }
  const std::vector<std::string>& names() const { return names_; }

 private:
  std::unordered_map<std::string, std::uint32_t> ids_;
  std::vector<std::string> names_;
};

}  // namespace

TaggerModel train(std::span<const AnnotatedExample> dataset, const Hyperparams& hp) {
  hp.validate();
  if (dataset.empty()) throw Error("cannot train on an empty dataset");

  FeatureInterner interner;
  std::array<std::uint32_t, kNumLabels + 1> plabel_ids{};
  plabel_ids[0] = interner.intern(prev_label_feature(std::nullopt));
  for (std::size_t l = 0; l < kNumLabels; ++l) {
    plabel_ids[l + 1] = interner.intern(prev_label_feature(kAllLabels[l]));
  }

  std::vector<PreparedExample> prepared;
  prepared.reserve(dataset.size());
  std::size_t total_tokens = 0;
  for (const auto& ex : dataset) {
    validate_spans(ex);
    auto tokens = tokenize(ex.text);
    PreparedExample p;
    p.gold = spans_to_bio(tokens, ex.spans);
    for (std::size_t i = 0; i < tokens.size(); ++i) {
      std::vector<std::uint32_t> ids;
      for (auto& f : static_features(tokens, i)) ids.push_back(interner.intern(std::move(f)));
      p.token_features.push_back(std::move(ids));
    }
    total_tokens += tokens.size();
    prepared.push_back(std::move(p));
  }

  const std::size_t num_features = interner.names().size();
  std::vector<std::array<AveragedParam, kNumLabels>> params(num_features);
  std::vector<LabelWeights> delta(num_features);
  std::vector<std::uint32_t> touched;
  std::vector<bool> is_touched(num_features, false);

  std::seed_seq dropout_seq{static_cast<std::uint32_t>(hp.seed),
                            static_cast<std::uint32_t>(hp.seed >> 32), 0xd509u};
  std::mt19937_64 dropout_rng(dropout_seq);

  TrainingMeta meta;
  meta.hyperparams = hp;
  meta.dataset_fingerprint = dataset_fingerprint(dataset);
  meta.examples = dataset.size();
  meta.tokens = total_tokens;

  std::size_t snapshots = 0;
  std::vector<std::uint32_t> active;

  for (int epoch = 0; epoch < hp.epochs; ++epoch) {
    auto order = training_order(prepared.size(), hp.seed, epoch);
    std::size_t errors = 0;
    std::size_t pos = 0;
    for (std::size_t k = 0; pos < order.size(); ++k) {
      std::size_t end = std::min(order.size(), pos + batch_size(hp, k));
      for (; pos < end; ++pos) {
        const auto& ex = prepared[order[pos]];
        std::size_t prev = 0;  // index into plabel_ids; 0 is the start sentinel
        for (std::size_t i = 0; i < ex.gold.size(); ++i) {
          active.clear();
          for (auto id : ex.token_features[i]) {
            if (hp.dropout == 0.0 || unit_uniform(dropout_rng) >= hp.dropout) active.push_back(id);
          }
          if (hp.dropout == 0.0 || unit_uniform(dropout_rng) >= hp.dropout) {
            active.push_back(plabel_ids[prev]);
          }
          LabelWeights scores{};
          for (auto id : active) {
            for (std::size_t l = 0; l < kNumLabels; ++l) scores[l] += params[id][l].w;
          }
          auto guess = best_label(scores);
          auto gold = ex.gold[i];
          if (guess != gold) {
            ++errors;
            for (auto id : active) {
              delta[id][static_cast<std::size_t>(gold)] += hp.learning_rate;
              delta[id][static_cast<std::size_t>(guess)] -= hp.learning_rate;
              if (!is_touched[id]) {
                is_touched[id] = true;
                touched.push_back(id);
              }
            }
          }
          prev = static_cast<std::size_t>(guess) + 1;
        }
      }

      // Apply the batch, then record one averaging snapshot.
      for (auto id : touched) {
        for (std::size_t l = 0; l < kNumLabels; ++l) {
          if (delta[id][l] == 0.0) continue;
          auto& p = params[id][l];
          p.total += static_cast<double>(snapshots - p.stamp) * p.w;
          p.stamp = snapshots;
          p.w += delta[id][l];
          if (!std::isfinite(p.w)) {
            throw Error("non-finite weight for feature " + interner.names()[id]);
          }
        }
        delta[id] = {};
        is_touched[id] = false;
      }
      touched.clear();
      ++snapshots;
    }
    double loss = total_tokens ? static_cast<double>(errors) / static_cast<double>(total_tokens) : 0.0;
    meta.epoch_loss.push_back(loss);
    spdlog::debug("epoch {}: loss {:.6f}", epoch + 1, loss);
  }
  meta.updates = snapshots;

  // Sorted feature order keeps the model layout independent of the data order.
  std::vector<std::uint32_t> ids(num_features);
  for (std::uint32_t i = 0; i < num_features; ++i) ids[i] = i;
  std::sort(ids.begin(), ids.end(),
            [&](auto a, auto b) { return interner.names()[a] < interner.names()[b]; });

  std::vector<std::string> names;
  std::vector<LabelWeights> averaged;
  for (auto id : ids) {
    LabelWeights w{};
    bool any = false;
    for (std::size_t l = 0; l < kNumLabels; ++l) {
      const auto& p = params[id][l];
      double sum = p.total + static_cast<double>(snapshots - p.stamp) * p.w;
      w[l] = sum / static_cast<double>(snapshots);
      if (!std::isfinite(w[l])) throw Error("non-finite averaged weight for " + interner.names()[id]);
      any = any || w[l] != 0.0;
    }
    if (!any) continue;
    names.push_back(interner.names()[id]);
    averaged.push_back(w);
  }
  spdlog::info("trained tagger: {} examples, {} tokens, {} features, {}", dataset.size(),
               total_tokens, names.size(), hyperparams_summary(hp));
  return TaggerModel(std::move(names), std::move(averaged), std::move(meta));
}

}  // namespace quakeloc
