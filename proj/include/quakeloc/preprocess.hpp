#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "quakeloc/timeutil.hpp"

namespace quakeloc {

struct RawTweet {
  std::string id;
  Timestamp timestamp{};
  std::string content;
  std::optional<std::string> language;
  std::optional<std::vector<std::string>> hashtags;
};

struct CleanTweet {
  std::string id;
  Timestamp timestamp{};
  std::string content;

  friend bool operator==(const CleanTweet&, const CleanTweet&) = default;
};

struct CleanerConfig {
  // Punctuation that survives cleaning; each gets one trailing space.
  std::string kept_symbols = ",?!;";
};

// Tweets whose folded content or hashtags contain any folded keyword.
std::vector<RawTweet> filter_keywords(std::span<const RawTweet> tweets,
                                      std::span<const std::string> keywords);

// Language tag "en"; untagged tweets pass when at least 90% of their code
// points are ASCII.
std::vector<RawTweet> filter_english(std::span<const RawTweet> tweets);

// Drops tweets whose content repeats an earlier tweet's content.
std::vector<RawTweet> dedupe(std::span<const RawTweet> tweets);

// Character-level normalisation of a single tweet:
//   1. every non-ASCII code point becomes one space
//   2. URL substrings are deleted
//   3. '.' gets a trailing space unless it sits between two digits
//   4. other symbols outside kept_symbols become a space
//   5. kept symbols get a trailing space
//   6. whitespace runs collapse to one space; ends are trimmed
// Returns nullopt if anything non-ASCII survives.
std::optional<std::string> clean(std::string_view text, const CleanerConfig& cfg = {});

// True if text contains a substring matching the URL pattern: "http://",
// "https://" or "www." (any case) up to the next whitespace.
bool contains_url(std::string_view text);

// filter_english -> dedupe -> clean. Empty or rejected results are dropped.
std::vector<CleanTweet> preprocess_corpus(std::span<const RawTweet> tweets,
                                          const CleanerConfig& cfg = {});

// Tweet CSV: header with id, date, content and optional lang, hashtags
// (';' separated). Rows with an unparseable date or empty id are skipped.
std::vector<RawTweet> read_tweet_csv(const std::filesystem::path& path,
                                     std::size_t* skipped = nullptr);
void write_tweet_csv(std::span<const RawTweet> tweets, const std::filesystem::path& path);

// Cleaned tweets use the same layout with only id, date and content.
std::vector<CleanTweet> read_clean_csv(const std::filesystem::path& path);
void write_clean_csv(std::span<const CleanTweet> tweets, const std::filesystem::path& path);

}  // namespace quakeloc
