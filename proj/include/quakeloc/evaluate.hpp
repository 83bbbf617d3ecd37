#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "quakeloc/dataset.hpp"
#include "quakeloc/tagger.hpp"

namespace quakeloc {

// Token classes in report order.
enum class TokenClass : std::uint8_t { kDisaster = 0, kGpe = 1, kO = 2 };
inline constexpr std::size_t kNumClasses = 3;
inline constexpr std::array<TokenClass, kNumClasses> kAllClasses = {TokenClass::kDisaster,
                                                                   TokenClass::kGpe, TokenClass::kO};
std::string_view class_name(TokenClass c);

std::vector<std::pair<Token, TokenClass>> token_labels(const AnnotatedExample& example);

struct ConfusionMatrix {
  // counts[gold][predicted]
  std::array<std::array<std::uint64_t, kNumClasses>, kNumClasses> counts{};

  std::uint64_t total() const;
  std::uint64_t row_sum(TokenClass gold) const;
  std::uint64_t column_sum(TokenClass predicted) const;
  std::uint64_t at(TokenClass gold, TokenClass predicted) const {
    return counts[static_cast<std::size_t>(gold)][static_cast<std::size_t>(predicted)];
  }
};

// Throws quakeloc::Error naming the first example whose texts differ.
ConfusionMatrix confusion(std::span<const AnnotatedExample> gold,
                          std::span<const AnnotatedExample> pred);

struct ClassMetrics {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::uint64_t support = 0;
};

struct ClassReport {
  std::array<ClassMetrics, kNumClasses> per_class{};
  double accuracy = 0.0;

  const ClassMetrics& operator[](TokenClass c) const { return per_class[static_cast<std::size_t>(c)]; }

  std::string to_text() const;
  std::string to_json() const;  // {label: {precision, recall, f1, support}, accuracy}
};

ClassReport class_report(const ConfusionMatrix& cm);

// Share of gold spans with this label that appear verbatim (same start, end
// and label) in the prediction. 0 when there are no gold spans of the label.
double entity_accuracy(std::span<const AnnotatedExample> gold,
                       std::span<const AnnotatedExample> pred, EntityLabel label);

}  // namespace quakeloc
