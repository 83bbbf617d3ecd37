#include "quakeloc/preprocess.hpp"

#include <spdlog/spdlog.h>

#include <fstream>
#include <unordered_set>

#include "quakeloc/csv.hpp"
#include "quakeloc/error.hpp"
#include "quakeloc/kernels.hpp"
#include "quakeloc/text.hpp"

namespace quakeloc {

namespace {

bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' || c == '\f';
}

bool is_digit(char c) { return c >= '0' && c <= '9'; }

bool is_alnum(char c) {
  return is_digit(c) || (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
}

// Length of a URL starting at text[i], or 0.
std::size_t url_length_at(std::string_view text, std::size_t i) {
  static constexpr std::string_view kPrefixes[] = {"http://", "https://", "www."};
  for (auto prefix : kPrefixes) {
    if (i + prefix.size() > text.size()) continue;
    bool match = true;
    for (std::size_t k = 0; k < prefix.size() && match; ++k) {
      match = fold_char(text[i + k]) == prefix[k];
    }
    if (!match) continue;
    std::size_t j = i + prefix.size();
    while (j < text.size() && !is_space(text[j])) ++j;
    return j - i;
  }
  return 0;
}

std::string replace_non_ascii(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (std::size_t i = 0; i < text.size();) {
    auto u = static_cast<unsigned char>(text[i]);
    if (u < 0x80) {
      out.push_back(text[i]);
      ++i;
      continue;
    }
    std::size_t len = (u & 0xE0) == 0xC0 ? 2 : (u & 0xF0) == 0xE0 ? 3 : (u & 0xF8) == 0xF0 ? 4 : 1;
    std::size_t k = 1;
    while (k < len && i + k < text.size() &&
           (static_cast<unsigned char>(text[i + k]) & 0xC0) == 0x80) {
      ++k;
    }
    out.push_back(' ');
    i += k;
  }
  return out;
}

std::string strip_urls(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (std::size_t i = 0; i < text.size();) {
    if (auto n = url_length_at(text, i)) {
      i += n;
    } else {
      out.push_back(text[i++]);
    }
  }
  return out;
}

}  // namespace

bool contains_url(std::string_view text) {
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (url_length_at(text, i)) return true;
  }
  return false;
}

std::vector<RawTweet> filter_keywords(std::span<const RawTweet> tweets,
                                      std::span<const std::string> keywords) {
  std::vector<std::string> folded;
  for (const auto& k : keywords) folded.push_back(casefold(k));
  auto hit = [&](std::string_view text) {
    auto f = casefold(text);
    for (const auto& k : folded) {
      if (f.find(k) != std::string::npos) return true;
    }
    return false;
  };

  std::vector<RawTweet> out;
  for (const auto& t : tweets) {
    bool keep = hit(t.content);
    if (!keep && t.hashtags) {
      for (const auto& h : *t.hashtags) {
        if (hit(h)) {
          keep = true;
          break;
        }
      }
    }
    if (keep) out.push_back(t);
  }
  return out;
}

std::vector<RawTweet> filter_english(std::span<const RawTweet> tweets) {
  std::vector<RawTweet> out;
  for (const auto& t : tweets) {
    if (t.language) {
      if (*t.language == "en") out.push_back(t);
      continue;
    }
    std::size_t total = utf8_length(t.content);
    std::size_t ascii = 0;
    for (char c : t.content) ascii += static_cast<unsigned char>(c) < 0x80;
    if (total == 0 || ascii * 10 >= total * 9) out.push_back(t);
  }
  return out;
}

std::vector<RawTweet> dedupe(std::span<const RawTweet> tweets) {
  std::unordered_set<std::string_view> seen;
  std::vector<RawTweet> out;
  for (const auto& t : tweets) {
    if (seen.insert(t.content).second) out.push_back(t);
  }
  return out;
}

std::optional<std::string> clean(std::string_view text, const CleanerConfig& cfg) {
  std::string s = strip_urls(replace_non_ascii(text));

  std::string spaced;
  spaced.reserve(s.size() + s.size() / 4);
  for (std::size_t i = 0; i < s.size(); ++i) {
    char c = s[i];
    if (c == '.') {
      spaced.push_back('.');
      bool numeric = i > 0 && i + 1 < s.size() && is_digit(s[i - 1]) && is_digit(s[i + 1]);
      if (!numeric) spaced.push_back(' ');
    } else if (cfg.kept_symbols.find(c) != std::string::npos) {
      spaced.push_back(c);
      spaced.push_back(' ');
    } else if (!is_alnum(c) && !is_space(c)) {
      spaced.push_back(' ');
    } else {
      spaced.push_back(c);
    }
  }

  std::string out;
  out.reserve(spaced.size());
  bool pending_space = false;
  for (char c : spaced) {
    if (is_space(c)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) out.push_back(' ');
    pending_space = false;
    out.push_back(c);
  }

  if (!is_ascii(out)) return std::nullopt;
  return out;
}

std::vector<CleanTweet> preprocess_corpus(std::span<const RawTweet> tweets,
                                          const CleanerConfig& cfg) {
  auto english = filter_english(tweets);
  auto unique = dedupe(english);

  std::vector<std::string> contents;
  contents.reserve(unique.size());
  for (const auto& t : unique) contents.push_back(t.content);
  auto cleaned = kernels::clean_contents(contents, cfg);

  std::vector<CleanTweet> out;
  for (std::size_t i = 0; i < unique.size(); ++i) {
    if (!cleaned[i] || cleaned[i]->empty()) continue;
    out.push_back({unique[i].id, unique[i].timestamp, std::move(*cleaned[i])});
  }
  spdlog::info("preprocess: {} raw, {} english, {} unique, {} clean", tweets.size(),
               english.size(), unique.size(), out.size());
  return out;
}

std::vector<RawTweet> read_tweet_csv(const std::filesystem::path& path, std::size_t* skipped) {
  auto table = csv::read_table(path);
  auto id_col = table.column("id");
  auto date_col = table.column("date");
  auto content_col = table.column("content");
  if (!id_col || !date_col || !content_col) {
    throw Error("tweet CSV " + path.string() + " must have id, date and content columns");
  }
  auto lang_col = table.column("lang");
  auto tags_col = table.column("hashtags");

  std::vector<RawTweet> tweets;
  std::size_t bad = 0;
  for (const auto& row : table.rows) {
    auto field = [&](std::size_t c) -> std::string_view {
      return c < row.size() ? std::string_view(row[c]) : std::string_view{};
    };
    RawTweet t;
    t.id = std::string(trim(field(*id_col)));
    auto ts = parse_timestamp(field(*date_col));
    if (t.id.empty() || !ts) {
      ++bad;
      continue;
    }
    t.timestamp = *ts;
    t.content = std::string(field(*content_col));
    if (lang_col) {
      auto lang = std::string(trim(field(*lang_col)));
      if (!lang.empty()) t.language = lang;
    }
    if (tags_col) {
      auto raw = trim(field(*tags_col));
      if (!raw.empty()) {
        std::vector<std::string> tags;
        for (auto& tag : split(raw, ';')) {
          auto v = trim(tag);
          if (!v.empty()) tags.emplace_back(v);
        }
        t.hashtags = std::move(tags);
      }
    }
    tweets.push_back(std::move(t));
  }
  if (bad) spdlog::warn("{}: {} tweet row(s) with missing id or bad date skipped", path.string(), bad);
  if (skipped) *skipped = bad;
  return tweets;
}

void write_tweet_csv(std::span<const RawTweet> tweets, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << "id,date,content,lang,hashtags\n";
  for (const auto& t : tweets) {
    std::string tags;
    if (t.hashtags) {
      for (std::size_t i = 0; i < t.hashtags->size(); ++i) {
        if (i) tags.push_back(';');
        tags += (*t.hashtags)[i];
      }
    }
    out << csv::format_row({t.id, format_timestamp(t.timestamp), t.content,
                            t.language.value_or(""), tags})
        << '\n';
  }
}

std::vector<CleanTweet> read_clean_csv(const std::filesystem::path& path) {
  std::vector<CleanTweet> out;
  for (auto& t : read_tweet_csv(path)) {
    out.push_back({std::move(t.id), t.timestamp, std::move(t.content)});
  }
  return out;
}

void write_clean_csv(std::span<const CleanTweet> tweets, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << "id,date,content\n";
  for (const auto& t : tweets) {
    out << csv::format_row({t.id, format_timestamp(t.timestamp), t.content}) << '\n';
  }
}

}  // namespace quakeloc
