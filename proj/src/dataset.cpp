#include "quakeloc/dataset.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <fstream>

#include "json.hpp"
#include "quakeloc/error.hpp"
#include "quakeloc/kernels.hpp"
#include "quakeloc/text.hpp"

namespace quakeloc {

using nlohmann::json;

std::string_view label_name(EntityLabel label) {
  return label == EntityLabel::kGpe ? "GPE" : "DISASTER";
}

EntityLabel parse_label(std::string_view name) {
  if (name == "GPE") return EntityLabel::kGpe;
  if (name == "DISASTER") return EntityLabel::kDisaster;
  throw Error("unknown entity label '" + std::string(name) + "'");
}

void validate_spans(const AnnotatedExample& example) {
  std::size_t prev_end = 0;
  for (const auto& s : example.spans) {
    if (s.start >= s.end || s.end > example.text.size()) {
      throw Error("span [" + std::to_string(s.start) + ", " + std::to_string(s.end) +
                  ") out of bounds for text of length " + std::to_string(example.text.size()));
    }
    if (s.start < prev_end) throw Error("overlapping or unsorted spans in: " + example.text);
    prev_end = s.end;
  }
}

std::vector<std::string> KeywordTable::keywords() const {
  std::vector<std::string> out;
  for (const auto& c : categories) {
    for (const auto& k : c.keywords) {
      if (std::find(out.begin(), out.end(), k) == out.end()) out.push_back(k);
    }
  }
  return out;
}

namespace {

KeywordTable parse_keyword_table(std::istream& in, const std::string& origin) {
  KeywordTable table;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto body = trim(line);
    if (body.empty() || body.front() == '#') continue;
    auto tab = body.find('\t');
    if (tab == std::string_view::npos) {
      throw Error(origin + ":" + std::to_string(lineno) + ": expected '<category><TAB><keywords>'");
    }
    KeywordCategory cat{std::string(trim(body.substr(0, tab))), {}};
    for (const auto& k : split(body.substr(tab + 1), ',')) {
      auto kw = casefold(trim(k));
      if (!kw.empty()) cat.keywords.push_back(std::move(kw));
    }
    if (cat.name.empty() || cat.keywords.empty()) {
      throw Error(origin + ":" + std::to_string(lineno) + ": empty category or keyword list");
    }
    table.categories.push_back(std::move(cat));
  }
  if (table.categories.empty()) throw Error(origin + ": keyword table is empty");
  return table;
}

}  // namespace

const KeywordTable& default_keyword_table() {
  static const KeywordTable table = [] {
    KeywordTable t;
    t.categories = {
        {"Core Earthquake",
         {"earthquake", "tremor", "aftershock", "seismic", "fault", "epicenter", "magnitude",
          "richter scale", "shaking", "ground", "quake", "foreshock", "tectonic", "plate",
          "shockwave", "aftermath", "felt", "feel"}},
        {"Descriptive",
         {"strong", "massive", "devastating", "violent", "powerful", "intense", "mild", "deep",
          "surface", "shallow"}},
        {"Damages and Effects",
         {"damage",    "damages",   "damaged",   "collapse",   "collapsed", "ruins",
          "wreckage",  "destroyed", "cracks",    "crumbling",  "aftermath", "impact",
          "destruction", "disaster", "displaced", "kill",      "kills",     "killed",
          "homeless",  "injury",    "injuries",  "fatalities", "debris",    "rubble",
          "casualties", "trapped",  "death",     "die",        "died",      "wreckage",
          "injured",   "injury",    "crashed",   "crash",      "blast",     "blasted"}},
        {"Responses and Warnings",
         {"alert", "warning", "evacuation", "rescue", "search", "emergency", "assistance",
          "volunteers", "preparedness", "shelter", "relief efforts", "response team"}},
        {"Measurement and Science",
         {"richter", "seismograph", "seismology", "intensity", "measurement", "scale", "usgs",
          "depth", "geological", "seismometer", "seismic"}},
        {"Natural Disasters and Events",
         {"tsunami", "landslide", "fire", "eruption", "volcano", "flood"}},
        {"Social and Emotional",
         {"pray", "thoughts", "fear", "panic", "trauma", "loss", "tragedy", "devastation",
          "solidarity", "support"}},
    };
    return t;
  }();
  return table;
}

KeywordTable load_keyword_table(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("keyword table not found: " + path.string());
  return parse_keyword_table(in, path.string());
}

std::vector<AnnotatedExample> build_template_dataset(std::span<const std::string> locations,
                                                     std::span<const std::string> templates) {
  if (locations.empty()) throw ConfigError("template dataset needs at least one location");
  for (const auto& t : templates) {
    auto first = t.find(kPlaceholder);
    if (first == std::string::npos || t.find(kPlaceholder, first + 1) != std::string::npos) {
      throw ConfigError("template must contain exactly one '{}' placeholder: " + t);
    }
  }
  std::vector<AnnotatedExample> out;
  out.reserve(templates.size() * locations.size());
  for (const auto& t : templates) {
    auto at = t.find(kPlaceholder);
    for (const auto& loc : locations) {
      AnnotatedExample ex;
      ex.text = t.substr(0, at) + loc + t.substr(at + kPlaceholder.size());
      ex.spans.push_back({at, at + loc.size(), EntityLabel::kGpe});
      out.push_back(std::move(ex));
    }
  }
  return out;
}

std::vector<std::string> load_templates(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("template file not found: " + path.string());
  std::vector<std::string> out;
  std::string line;
  while (std::getline(in, line)) {
    auto t = trim(line);
    if (!t.empty() && t.front() != '#') out.emplace_back(t);
  }
  if (out.empty()) throw ConfigError("template file has no templates: " + path.string());
  return out;
}

std::set<std::string> extract_hashtags(std::span<const RawTweet> tweets) {
  std::set<std::string> out;
  auto add = [&](std::string_view tag) {
    while (!tag.empty() && tag.front() == '#') tag.remove_prefix(1);
    tag = trim(tag);
    if (!tag.empty()) out.insert(casefold(tag));
  };
  for (const auto& t : tweets) {
    if (t.hashtags && !t.hashtags->empty()) {
      for (const auto& h : *t.hashtags) add(h);
      continue;
    }
    const auto& s = t.content;
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (s[i] != '#') continue;
      std::size_t j = i + 1;
      while (j < s.size() && (is_word_char(s[j]) && s[j] != '\'')) ++j;
      if (j > i + 1) add(std::string_view(s).substr(i + 1, j - i - 1));
      i = j - 1;
    }
  }
  return out;
}

HashtagSet filter_location_hashtags(const std::set<std::string>& hashtags, const Gazetteer& g,
                                    GeocodeVerifier* verifier) {
  HashtagSet out;
  out.all = hashtags;
  for (const auto& h : hashtags) {
    if (validate_location(g, h, verifier)) out.valid_locations.insert(h);
  }
  return out;
}

CyclicNames::CyclicNames(std::span<const std::string> names, std::uint64_t seed) : names_(names) {
  if (names_.empty()) throw ConfigError("location substitution needs at least one target name");
  pos_ = static_cast<std::size_t>(seed % names_.size());
}

const std::string& CyclicNames::next() {
  const auto& name = names_[pos_];
  pos_ = (pos_ + 1) % names_.size();
  return name;
}

std::string substitute_locations(std::string_view text, const PatternMatcher& valid,
                                 CyclicNames& names) {
  std::string masked(text);
  for (const auto& m : valid.find_all(text)) {
    std::fill(masked.begin() + static_cast<std::ptrdiff_t>(m.start),
              masked.begin() + static_cast<std::ptrdiff_t>(m.end), '#');
  }
  std::string out;
  out.reserve(masked.size());
  for (std::size_t i = 0; i < masked.size(); ++i) {
    if (masked[i] != '#') {
      out.push_back(masked[i]);
      continue;
    }
    while (i + 1 < masked.size() && masked[i + 1] == '#') ++i;
    out += names.next();
  }
  return out;
}

std::vector<CleanTweet> substitute_locations(std::span<const CleanTweet> tweets,
                                             const HashtagSet& hv,
                                             std::span<const std::string> target_locations,
                                             std::uint64_t seed) {
  PatternMatcher valid(std::vector<std::string>(hv.valid_locations.begin(), hv.valid_locations.end()));
  CyclicNames names(target_locations, seed);
  std::vector<CleanTweet> out;
  out.reserve(tweets.size());
  for (const auto& t : tweets) {
    out.push_back({t.id, t.timestamp, substitute_locations(t.content, valid, names)});
  }
  return out;
}

AnnotatedExample GpeTagger::tag(std::string text) const {
  AnnotatedExample ex;
  for (const auto& m : matcher_.find_words(text)) {
    ex.spans.push_back({m.start, m.end, EntityLabel::kGpe});
  }
  ex.text = std::move(text);
  return ex;
}

std::vector<AnnotatedExample> tag_gpe(std::span<const CleanTweet> tweets,
                                      const std::vector<std::string>& names) {
  GpeTagger tagger(names);
  std::vector<std::string> texts;
  texts.reserve(tweets.size());
  for (const auto& t : tweets) texts.push_back(t.content);
  return kernels::tag_texts(tagger, texts);
}

AnnotatedExample DisasterTagger::tag(AnnotatedExample example) const {
  const auto& text = example.text;
  auto candidates = matcher_.find_all(text);
  std::erase_if(candidates, [&](const PatternMatch& m) {
    if (!at_word_boundaries(text, m.start, m.end)) return true;
    for (const auto& s : example.spans) {
      if (m.start < s.end && s.start < m.end) return true;
    }
    return false;
  });
  for (const auto& m : PatternMatcher::leftmost_longest(std::move(candidates))) {
    example.spans.push_back({m.start, m.end, EntityLabel::kDisaster});
  }
  std::sort(example.spans.begin(), example.spans.end(),
            [](const EntitySpan& a, const EntitySpan& b) { return a.start < b.start; });
  return example;
}

std::vector<AnnotatedExample> tag_disaster(std::span<const AnnotatedExample> examples,
                                           const KeywordTable& d) {
  DisasterTagger tagger(d);
  std::vector<AnnotatedExample> out;
  out.reserve(examples.size());
  for (const auto& ex : examples) {
    for (const auto& s : ex.spans) {
      if (s.label != EntityLabel::kGpe) throw Error("tag_disaster expects GPE-only input");
    }
    out.push_back(tagger.tag(ex));
  }
  return out;
}

std::string to_jsonl_line(const AnnotatedExample& example) {
  std::string line = "[";
  line += json(example.text).dump();
  line += ", {\"entities\": [";
  for (std::size_t i = 0; i < example.spans.size(); ++i) {
    const auto& s = example.spans[i];
    if (i) line += ", ";
    line += "[" + std::to_string(byte_to_char_offset(example.text, s.start)) + ", " +
            std::to_string(byte_to_char_offset(example.text, s.end)) + ", \"" +
            std::string(label_name(s.label)) + "\"]";
  }
  line += "]}]";
  return line;
}

AnnotatedExample from_jsonl_line(std::string_view line) {
  json v;
  try {
    v = json::parse(line);
  } catch (const json::parse_error& e) {
    throw Error(std::string("invalid JSON: ") + e.what());
  }
  if (!v.is_array() || v.size() != 2 || !v[0].is_string() || !v[1].is_object() ||
      !v[1].contains("entities") || !v[1]["entities"].is_array()) {
    throw Error("expected [\"<text>\", {\"entities\": [...]}]");
  }
  AnnotatedExample ex;
  ex.text = v[0].get<std::string>();
  for (const auto& e : v[1]["entities"]) {
    if (!e.is_array() || e.size() != 3 || !e[0].is_number_unsigned() ||
        !e[1].is_number_unsigned() || !e[2].is_string()) {
      throw Error("entity must be [start, end, \"LABEL\"]");
    }
    auto start = e[0].get<std::size_t>();
    auto end = e[1].get<std::size_t>();
    if (end > utf8_length(ex.text)) throw Error("entity end beyond text length");
    ex.spans.push_back({char_to_byte_offset(ex.text, start), char_to_byte_offset(ex.text, end),
                        parse_label(e[2].get<std::string>())});
  }
  std::sort(ex.spans.begin(), ex.spans.end(),
            [](const EntitySpan& a, const EntitySpan& b) { return a.start < b.start; });
  validate_spans(ex);
  return ex;
}

void write_jsonl(std::span<const AnnotatedExample> examples, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  for (const auto& ex : examples) {
    validate_spans(ex);
    out << to_jsonl_line(ex) << '\n';
  }
  if (!out) throw Error("write failed: " + path.string());
}

std::vector<AnnotatedExample> read_jsonl(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("JSONL file not found: " + path.string());
  std::vector<AnnotatedExample> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    try {
      out.push_back(from_jsonl_line(line));
    } catch (const Error& e) {
      throw Error(path.string() + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  return out;
}

}  // namespace quakeloc
