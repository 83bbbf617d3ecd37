#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "quakeloc/dataset.hpp"

namespace quakeloc {

struct Token {
  std::string text;
  std::size_t start = 0;
  std::size_t end = 0;

  friend bool operator==(const Token&, const Token&) = default;
};

// Maximal runs of [A-Za-z0-9']; everything else separates.
std::vector<Token> tokenize(std::string_view text);

// Order doubles as the decoding tie-break order.
enum class BioLabel : std::uint8_t { kO = 0, kBGpe, kIGpe, kBDisaster, kIDisaster };
inline constexpr std::size_t kNumLabels = 5;
inline constexpr std::array<BioLabel, kNumLabels> kAllLabels = {
    BioLabel::kO, BioLabel::kBGpe, BioLabel::kIGpe, BioLabel::kBDisaster, BioLabel::kIDisaster};

std::string_view bio_name(BioLabel label);
std::optional<BioLabel> parse_bio(std::string_view name);

// Tokens overlapping a span take its label: B on the first such token and
// I on the rest. Spans that cut through a token therefore widen to it.
std::vector<BioLabel> spans_to_bio(std::span<const Token> tokens, std::span<const EntitySpan> spans);

// Merges B/I runs into spans. An I that does not continue a run of the same
// entity type opens a new span, as if it were B.
std::vector<EntitySpan> bio_to_spans(std::span<const Token> tokens, std::span<const BioLabel> labels);

// Features of tokens[i] that do not depend on the previous label.
std::vector<std::string> static_features(std::span<const Token> tokens, std::size_t i);

// static_features plus the previous-label feature. A missing previous label
// means the sentence start.
std::vector<std::string> features(std::span<const Token> tokens, std::size_t i,
                                  std::optional<BioLabel> prev_label);

std::string prev_label_feature(std::optional<BioLabel> prev_label);

struct Hyperparams {
  int epochs = 40;
  double dropout = 0.2;
  std::size_t batch_start = 128;
  std::size_t batch_stop = 256;
  double batch_growth = 1.3;
  // Scales every perceptron update. Greedy argmax decoding is invariant to a
  // positive scale, so this changes weight magnitudes only.
  double learning_rate = 1e-5;
  std::uint64_t seed = 0;

  void validate() const;  // throws quakeloc::ConfigError
  friend bool operator==(const Hyperparams&, const Hyperparams&) = default;
};

// Size of the k-th batch of an epoch.
std::size_t batch_size(const Hyperparams& hp, std::size_t k);

// Example order for one epoch; a pure function of (n, seed, epoch).
std::vector<std::size_t> training_order(std::size_t n, std::uint64_t seed, int epoch);

struct TrainingMeta {
  Hyperparams hyperparams;
  std::string dataset_fingerprint;
  std::size_t examples = 0;
  std::size_t tokens = 0;
  std::size_t updates = 0;  // number of averaged weight snapshots
  std::vector<double> epoch_loss;

  friend bool operator==(const TrainingMeta&, const TrainingMeta&) = default;
};

using LabelWeights = std::array<double, kNumLabels>;

// Averaged-perceptron weights. Immutable once built; predict is safe to call
// concurrently.
class TaggerModel {
 public:
  TaggerModel() = default;
  TaggerModel(std::vector<std::string> feature_names, std::vector<LabelWeights> weights,
              TrainingMeta meta);

  double weight(std::string_view feature, BioLabel label) const;
  const TrainingMeta& meta() const { return meta_; }
  const std::vector<std::string>& feature_names() const { return features_; }
  const std::vector<LabelWeights>& weights() const { return weights_; }

  std::vector<BioLabel> predict_labels(std::span<const Token> tokens) const;
  std::vector<EntitySpan> predict(std::string_view text) const;

  std::string serialize() const;
  static TaggerModel deserialize(std::string_view bytes);  // throws quakeloc::Error
  void save(const std::filesystem::path& path) const;
  static TaggerModel load(const std::filesystem::path& path);

  friend bool operator==(const TaggerModel& a, const TaggerModel& b) {
    return a.features_ == b.features_ && a.weights_ == b.weights_ && a.meta_ == b.meta_;
  }

 private:
  std::vector<std::string> features_;
  std::vector<LabelWeights> weights_;
  std::unordered_map<std::string, std::size_t> index_;
  TrainingMeta meta_;
};

// Argmax with ties resolved toward the earliest label in kAllLabels.
BioLabel best_label(const LabelWeights& scores);

std::string dataset_fingerprint(std::span<const AnnotatedExample> dataset);

// Mini-batch averaged perceptron with greedy left-to-right decoding and
// feature dropout. Throws quakeloc::Error on an empty dataset, invalid spans
// or a non-finite weight.
TaggerModel train(std::span<const AnnotatedExample> dataset, const Hyperparams& hp);

}  // namespace quakeloc
