#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace quakeloc {

struct PatternMatch {
  std::size_t start = 0;
  std::size_t end = 0;      // exclusive
  std::size_t pattern = 0;  // index into PatternMatcher::patterns()

  friend bool operator==(const PatternMatch&, const PatternMatch&) = default;
};

// Aho-Corasick automaton over ASCII-folded byte strings. Built once, then
// safe for concurrent matching.
class PatternMatcher {
 public:
  PatternMatcher() = default;
  // Patterns are folded and deduplicated; empty patterns are ignored. The
  // first spelling of each folded pattern is kept.
  explicit PatternMatcher(const std::vector<std::string>& patterns);

  const std::vector<std::string>& patterns() const { return patterns_; }
  std::size_t size() const { return patterns_.size(); }

  // Every case-insensitive occurrence, overlapping ones included, ordered
  // by end offset then by decreasing length.
  std::vector<PatternMatch> find_all(std::string_view text) const;

  // Non-overlapping whole-word matches chosen leftmost-longest: scanning
  // left to right, the longest boundary-delimited match starting at the
  // earliest free position wins.
  std::vector<PatternMatch> find_words(std::string_view text) const;

  // Greedy leftmost-longest selection of non-overlapping candidates.
  static std::vector<PatternMatch> leftmost_longest(std::vector<PatternMatch> candidates);

 private:
  struct Node {
    std::vector<std::pair<unsigned char, std::int32_t>> next;  // sorted by byte
    std::int32_t fail = 0;
    std::int32_t output = -1;       // pattern ending exactly here
    std::int32_t output_link = -1;  // nearest suffix node with an output
    std::uint32_t depth = 0;
  };

  std::int32_t child(std::int32_t node, unsigned char c) const;

  std::vector<Node> nodes_;
  std::vector<std::string> patterns_;
};

}  // namespace quakeloc
