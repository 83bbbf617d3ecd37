#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "quakeloc/dataset.hpp"
#include "quakeloc/gazetteer.hpp"
#include "quakeloc/preprocess.hpp"

namespace quakeloc {

inline constexpr double kEarthRadiusKm = 6371.0;

struct LatLon {
  double lat = 0.0;
  double lon = 0.0;
};

double haversine(LatLon a, LatLon b);

enum class SeverityColor { kYellow, kOrange, kRed };
std::string_view color_name(SeverityColor c);

// yellow below a third of the peak count, red from two thirds up
SeverityColor severity_color(std::uint64_t count, std::uint64_t max_count);

struct SeverityPoint {
  std::int64_t geoname_id = 0;
  std::string name;
  double latitude = 0.0;
  double longitude = 0.0;
  std::uint64_t count = 0;
  double severity = 0.0;
  SeverityColor color = SeverityColor::kYellow;
};

struct GeocodeResult {
  std::vector<SeverityPoint> points;  // descending count, then ascending geoname_id
  std::uint64_t resolved_mentions = 0;
  std::uint64_t unresolved_mentions = 0;
};

GeocodeResult geocode_entities(std::span<const AnnotatedExample> tagged, const Gazetteer& g);

// RFC 7946 FeatureCollection. Throws quakeloc::Error on out-of-range
// coordinates. `metadata` is written as a foreign member when non-empty.
std::string geojson_document(std::span<const SeverityPoint> points,
                             const std::map<std::string, std::string>& metadata = {});
void emit_geojson(std::span<const SeverityPoint> points, const std::filesystem::path& path,
                  const std::map<std::string, std::string>& metadata = {});
std::vector<SeverityPoint> read_geojson(const std::filesystem::path& path);

struct EpicenterRecord {
  Timestamp time{};
  double latitude = 0.0;
  double longitude = 0.0;
  double magnitude = 0.0;
  std::string place;
};

struct CatalogLoadStats {
  std::size_t rows = 0;
  std::size_t rejected = 0;
};

// USGS catalog CSV with header-discovered time, latitude, longitude, mag and
// place columns. Rows with bad coordinates, time or magnitude are skipped.
std::vector<EpicenterRecord> load_usgs_catalog(const std::filesystem::path& path,
                                               CatalogLoadStats* stats = nullptr);

using CountryResolver = std::function<std::optional<std::string>(const std::string& place)>;

// Resolves the text after the last comma of a USGS place string through the
// gazetteer and reports the matching record's name. `countries` must
// outlive the resolver.
CountryResolver gazetteer_country_resolver(const Gazetteer& countries);

std::map<std::string, std::uint64_t> historical_country_frequencies(
    std::span<const EpicenterRecord> catalog, double min_magnitude, const CountryResolver& country_of);

struct MapComparison {
  std::vector<double> nearest_km;  // per severity point
  double weighted_mean_km = 0.0;   // weighted by mention count
  double rank_correlation = 0.0;   // Spearman, severity vs 1 / nearest distance
};

// Throws quakeloc::Error if either side is empty.
MapComparison compare_maps(std::span<const SeverityPoint> points,
                           std::span<const EpicenterRecord> epicenters);

// Spearman correlation with average ranks for ties; 0 when undefined.
double spearman(std::span<const double> x, std::span<const double> y);

// Tweets per UTC day over the whole observed span, empty days included.
std::map<std::chrono::sys_days, std::uint64_t> timeline(std::span<const CleanTweet> tweets);
std::string timeline_csv(const std::map<std::chrono::sys_days, std::uint64_t>& counts);

}  // namespace quakeloc
