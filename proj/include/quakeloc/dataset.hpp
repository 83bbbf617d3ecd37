#pragma once

#include <cstdint>
#include <filesystem>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "quakeloc/gazetteer.hpp"
#include "quakeloc/pattern_matcher.hpp"
#include "quakeloc/preprocess.hpp"

namespace quakeloc {

enum class EntityLabel { kGpe, kDisaster };

std::string_view label_name(EntityLabel label);
EntityLabel parse_label(std::string_view name);  // throws quakeloc::Error

// Byte offsets into the example text; end is exclusive. JSONL files carry
// code point offsets and are converted on the way in and out.
struct EntitySpan {
  std::size_t start = 0;
  std::size_t end = 0;
  EntityLabel label = EntityLabel::kGpe;

  friend bool operator==(const EntitySpan&, const EntitySpan&) = default;
};

struct AnnotatedExample {
  std::string text;
  std::vector<EntitySpan> spans;  // sorted by start, non-overlapping

  friend bool operator==(const AnnotatedExample&, const AnnotatedExample&) = default;
};

// Checks span bounds, ordering and overlap. Throws quakeloc::Error.
void validate_spans(const AnnotatedExample& example);

struct KeywordCategory {
  std::string name;
  std::vector<std::string> keywords;

  friend bool operator==(const KeywordCategory&, const KeywordCategory&) = default;
};

// Categories in file order.
struct KeywordTable {
  std::vector<KeywordCategory> categories;

  // Distinct keywords across all categories, in category order.
  std::vector<std::string> keywords() const;
  friend bool operator==(const KeywordTable&, const KeywordTable&) = default;
};

// The seven-category earthquake keyword table, lower-cased.
const KeywordTable& default_keyword_table();

// "<category>\t<kw>, <kw>, ..." per line; keywords are lower-cased.
KeywordTable load_keyword_table(const std::filesystem::path& path);

struct HashtagSet {
  std::set<std::string> all;
  std::set<std::string> valid_locations;
};

inline constexpr std::string_view kPlaceholder = "{}";
inline constexpr std::string_view kDefaultTemplate = "{} was affected severely by the earthquake.";

// One GPE-tagged example per (template, location), templates outermost.
// Throws quakeloc::ConfigError if a template lacks exactly one placeholder.
std::vector<AnnotatedExample> build_template_dataset(std::span<const std::string> locations,
                                                     std::span<const std::string> templates);

std::vector<std::string> load_templates(const std::filesystem::path& path);

// Folded hashtags without '#'. Tweets without a hashtag field contribute
// '#'-prefixed tokens of their content.
std::set<std::string> extract_hashtags(std::span<const RawTweet> tweets);

HashtagSet filter_location_hashtags(const std::set<std::string>& hashtags, const Gazetteer& g,
                                    GeocodeVerifier* verifier = nullptr);

// Cycles through target names in order, starting at seed mod size. Shared
// across tweets so a corpus is consumed sequentially.
class CyclicNames {
 public:
  CyclicNames(std::span<const std::string> names, std::uint64_t seed);
  const std::string& next();

 private:
  std::span<const std::string> names_;
  std::size_t pos_;
};

// Masks every occurrence of a valid location with '#', collapses '#' runs
// and fills each remaining '#' from the iterator.
std::string substitute_locations(std::string_view text, const PatternMatcher& valid,
                                 CyclicNames& names);
std::vector<CleanTweet> substitute_locations(std::span<const CleanTweet> tweets,
                                             const HashtagSet& hv,
                                             std::span<const std::string> target_locations,
                                             std::uint64_t seed);

// Whole-word, case-insensitive, leftmost-longest location tagging.
class GpeTagger {
 public:
  explicit GpeTagger(const std::vector<std::string>& names) : matcher_(names) {}
  AnnotatedExample tag(std::string text) const;
  const PatternMatcher& matcher() const { return matcher_; }

 private:
  PatternMatcher matcher_;
};

std::vector<AnnotatedExample> tag_gpe(std::span<const CleanTweet> tweets,
                                      const std::vector<std::string>& names);

// Adds whole-word keyword spans outside existing GPE spans.
class DisasterTagger {
 public:
  explicit DisasterTagger(const KeywordTable& table) : matcher_(table.keywords()) {}
  AnnotatedExample tag(AnnotatedExample example) const;

 private:
  PatternMatcher matcher_;
};

std::vector<AnnotatedExample> tag_disaster(std::span<const AnnotatedExample> examples,
                                           const KeywordTable& d);

// ["<text>", {"entities": [[start, end, "<LABEL>"], ...]}]
std::string to_jsonl_line(const AnnotatedExample& example);
AnnotatedExample from_jsonl_line(std::string_view line);  // throws quakeloc::Error

void write_jsonl(std::span<const AnnotatedExample> examples, const std::filesystem::path& path);
std::vector<AnnotatedExample> read_jsonl(const std::filesystem::path& path);

}  // namespace quakeloc
