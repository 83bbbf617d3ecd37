#pragma once

// Deterministic desk-scale data: synthetic gazetteers, tweet corpora and a
// USGS-style catalog shaped like the real inputs. Used by the test suites,
// the benchmark and the quakeloc-fixture tool.

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "quakeloc/gazetteer.hpp"
#include "quakeloc/preprocess.hpp"
#include "quakeloc/severity.hpp"

namespace quakeloc::fixtures {

inline constexpr LatLon kNotoEpicenter{37.495, 137.271};

// Distinct, title-cased Japanese-style names (some two-word).
std::vector<std::string> japanese_place_names(std::size_t n, std::uint64_t seed);

// Real anchor towns first, then n synthetic populated places (class P, JP).
std::vector<LocationRecord> japan_records(std::size_t n_synthetic, std::uint64_t seed);

// Populated places of the 2023 Turkey-Syria source region.
std::vector<LocationRecord> turkey_records();

// Country records (class A) and a handful of popular world cities.
std::vector<LocationRecord> world_records();

void write_geonames(std::span<const LocationRecord> records, const std::filesystem::path& path);

// Source-event tweets: mixed language, duplicates, emoji, URLs and location
// hashtags drawn from turkey_records().
std::vector<RawTweet> source_tweets(std::size_t n, std::uint64_t seed);

struct CaseStudyOptions {
  bool noisy = true;               // duplicates, non-English rows, emoji, URLs
  bool mention_countries = false;  // standalone country names such as "Japan"
  bool vary_case = true;           // some mentions typed in lower or upper case
  double proximity_bias = 1.0;     // >0 favours places near the epicenter
};

// Tweets about the 2024 Noto event mentioning the given places, with
// timestamps peaking on 2024-01-01.
std::vector<RawTweet> case_study_tweets(std::size_t n, std::span<const LocationRecord> places,
                                        std::uint64_t seed, const CaseStudyOptions& opts = {});

// Noto sequence aftershocks plus historical M7+ events worldwide.
std::vector<EpicenterRecord> usgs_catalog(std::uint64_t seed);
void write_usgs_catalog(std::span<const EpicenterRecord> events, const std::filesystem::path& path);

struct DeskFixture {
  std::filesystem::path dir;
  std::filesystem::path config;  // pipeline.conf
};

// Writes every input the `all` pipeline needs plus a config file that
// references them by absolute path.
DeskFixture write_desk_fixture(const std::filesystem::path& dir, std::uint64_t seed = 7);

}  // namespace quakeloc::fixtures
