#include "quakeloc/severity.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>

#include "json.hpp"
#include "quakeloc/csv.hpp"
#include "quakeloc/error.hpp"
#include "quakeloc/kernels.hpp"
#include "quakeloc/text.hpp"

namespace quakeloc {

using nlohmann::json;
using nlohmann::ordered_json;

double haversine(LatLon a, LatLon b) {
  constexpr double kRad = std::numbers::pi / 180.0;
  double dlat = (b.lat - a.lat) * kRad;
  double dlon = (b.lon - a.lon) * kRad;
  double h = std::sin(dlat / 2) * std::sin(dlat / 2) +
             std::cos(a.lat * kRad) * std::cos(b.lat * kRad) * std::sin(dlon / 2) * std::sin(dlon / 2);
  h = std::clamp(h, 0.0, 1.0);
  return 2.0 * kEarthRadiusKm * std::asin(std::sqrt(h));
}

std::string_view color_name(SeverityColor c) {
  switch (c) {
    case SeverityColor::kYellow:
      return "yellow";
    case SeverityColor::kOrange:
      return "orange";
    case SeverityColor::kRed:
      return "red";
  }
  return "yellow";
}

SeverityColor severity_color(std::uint64_t count, std::uint64_t max_count) {
  // integer form of severity < 1/3 and severity < 2/3
  if (3 * count < max_count) return SeverityColor::kYellow;
  if (3 * count < 2 * max_count) return SeverityColor::kOrange;
  return SeverityColor::kRed;
}

GeocodeResult geocode_entities(std::span<const AnnotatedExample> tagged, const Gazetteer& g) {
  GeocodeResult result;
  std::map<std::int64_t, SeverityPoint> by_id;
  for (const auto& ex : tagged) {
    for (const auto& s : ex.spans) {
      if (s.label != EntityLabel::kGpe) continue;
      auto name = std::string_view(ex.text).substr(s.start, s.end - s.start);
      const auto* rec = g.resolve(name);
      if (!rec) {
        ++result.unresolved_mentions;
        continue;
      }
      ++result.resolved_mentions;
      auto [it, inserted] = by_id.try_emplace(rec->geoname_id);
      if (inserted) {
        it->second.geoname_id = rec->geoname_id;
        it->second.name = rec->name;
        it->second.latitude = rec->latitude;
        it->second.longitude = rec->longitude;
      }
      ++it->second.count;
    }
  }
  std::uint64_t max_count = 0;
  for (const auto& [id, p] : by_id) max_count = std::max(max_count, p.count);
  for (auto& [id, p] : by_id) {
    p.severity = static_cast<double>(p.count) / static_cast<double>(max_count);
    p.color = severity_color(p.count, max_count);
    result.points.push_back(std::move(p));
  }
  std::stable_sort(result.points.begin(), result.points.end(),
                   [](const SeverityPoint& a, const SeverityPoint& b) { return a.count > b.count; });
  if (result.unresolved_mentions) {
    spdlog::info("geocoding: {} mention(s) not found in the gazetteer", result.unresolved_mentions);
  }
  return result;
}

std::string geojson_document(std::span<const SeverityPoint> points,
                             const std::map<std::string, std::string>& metadata) {
  ordered_json features = ordered_json::array();
  for (const auto& p : points) {
    if (!(p.latitude >= -90.0 && p.latitude <= 90.0 && p.longitude >= -180.0 && p.longitude <= 180.0)) {
      throw Error("severity point '" + p.name + "' has out-of-range coordinates");
    }
    features.push_back({{"type", "Feature"},
                        {"geometry", {{"type", "Point"}, {"coordinates", {p.longitude, p.latitude}}}},
                        {"properties",
                         {{"name", p.name},
                          {"geoname_id", p.geoname_id},
                          {"count", p.count},
                          {"severity", p.severity},
                          {"color", color_name(p.color)}}}});
  }
  ordered_json doc = {{"type", "FeatureCollection"}};
  if (!metadata.empty()) doc["metadata"] = metadata;
  doc["features"] = std::move(features);
  return doc.dump(2) + "\n";
}

void emit_geojson(std::span<const SeverityPoint> points, const std::filesystem::path& path,
                  const std::map<std::string, std::string>& metadata) {
  auto doc = geojson_document(points, metadata);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << doc;
}

std::vector<SeverityPoint> read_geojson(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("GeoJSON file not found: " + path.string());
  try {
    auto doc = json::parse(in);
    if (doc.at("type") != "FeatureCollection") throw Error("not a FeatureCollection");
    std::vector<SeverityPoint> out;
    for (const auto& f : doc.at("features")) {
      const auto& coords = f.at("geometry").at("coordinates");
      const auto& props = f.at("properties");
      SeverityPoint p;
      p.longitude = coords.at(0).get<double>();
      p.latitude = coords.at(1).get<double>();
      p.name = props.at("name").get<std::string>();
      p.geoname_id = props.value("geoname_id", std::int64_t{0});
      p.count = props.at("count").get<std::uint64_t>();
      p.severity = props.at("severity").get<double>();
      auto color = props.at("color").get<std::string>();
      p.color = color == "red" ? SeverityColor::kRed
                : color == "orange" ? SeverityColor::kOrange
                                    : SeverityColor::kYellow;
      out.push_back(std::move(p));
    }
    return out;
  } catch (const json::exception& e) {
    throw Error(path.string() + ": malformed GeoJSON: " + e.what());
  }
}

namespace {

bool parse_double(std::string_view s, double& out) {
  s = trim(s);
  if (s.empty()) return false;
  auto r = std::from_chars(s.data(), s.data() + s.size(), out);
  return r.ec == std::errc{} && r.ptr == s.data() + s.size() && std::isfinite(out);
}

}  // namespace

std::vector<EpicenterRecord> load_usgs_catalog(const std::filesystem::path& path,
                                               CatalogLoadStats* stats) {
  auto table = csv::read_table(path);
  const char* required[] = {"time", "latitude", "longitude", "mag", "place"};
  std::size_t cols[5];
  for (int i = 0; i < 5; ++i) {
    auto c = table.column(required[i]);
    if (!c) throw Error(path.string() + ": missing required column '" + required[i] + "'");
    cols[i] = *c;
  }

  CatalogLoadStats local;
  std::vector<EpicenterRecord> out;
  for (const auto& row : table.rows) {
    ++local.rows;
    auto field = [&](int i) -> std::string_view {
      return cols[i] < row.size() ? std::string_view(row[cols[i]]) : std::string_view{};
    };
    EpicenterRecord r;
    auto t = parse_timestamp(field(0));
    if (!t || !parse_double(field(1), r.latitude) || !parse_double(field(2), r.longitude) ||
        !parse_double(field(3), r.magnitude) || r.latitude < -90.0 || r.latitude > 90.0 ||
        r.longitude < -180.0 || r.longitude > 180.0) {
      ++local.rejected;
      continue;
    }
    r.time = *t;
    r.place = std::string(trim(field(4)));
    out.push_back(std::move(r));
  }
  if (local.rejected) spdlog::warn("{}: {} catalog row(s) rejected", path.string(), local.rejected);
  if (stats) *stats = local;
  return out;
}

CountryResolver gazetteer_country_resolver(const Gazetteer& countries) {
  return [&countries](const std::string& place) -> std::optional<std::string> {
    auto comma = place.rfind(',');
    auto region = trim(comma == std::string::npos ? std::string_view(place)
                                                  : std::string_view(place).substr(comma + 1));
    if (region.empty()) return std::nullopt;
    const auto* rec = countries.resolve(region);
    if (!rec) return std::nullopt;
    return rec->name;
  };
}

std::map<std::string, std::uint64_t> historical_country_frequencies(
    std::span<const EpicenterRecord> catalog, double min_magnitude, const CountryResolver& country_of) {
  std::map<std::string, std::uint64_t> out;
  for (const auto& e : catalog) {
    if (e.magnitude < min_magnitude) continue;
    ++out[country_of(e.place).value_or("unknown")];
  }
  return out;
}

double spearman(std::span<const double> x, std::span<const double> y) {
  const std::size_t n = x.size();
  if (n < 2 || y.size() != n) return 0.0;
  auto ranks = [n](std::span<const double> v) {
    std::vector<std::size_t> idx(n);
    for (std::size_t i = 0; i < n; ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(), [&](auto a, auto b) { return v[a] < v[b]; });
    std::vector<double> r(n);
    for (std::size_t i = 0; i < n;) {
      std::size_t j = i;
      while (j + 1 < n && v[idx[j + 1]] == v[idx[i]]) ++j;
      double avg = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
      for (std::size_t k = i; k <= j; ++k) r[idx[k]] = avg;
      i = j + 1;
    }
    return r;
  };
  auto rx = ranks(x);
  auto ry = ranks(y);
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += rx[i];
    my += ry[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxy += (rx[i] - mx) * (ry[i] - my);
    sxx += (rx[i] - mx) * (rx[i] - mx);
    syy += (ry[i] - my) * (ry[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) return 0.0;
  return sxy / std::sqrt(sxx * syy);
}

MapComparison compare_maps(std::span<const SeverityPoint> points,
                           std::span<const EpicenterRecord> epicenters) {
  if (points.empty()) throw Error("map comparison needs at least one severity point");
  if (epicenters.empty()) throw Error("map comparison needs at least one epicenter");

  std::vector<LatLon> from, to;
  for (const auto& p : points) from.push_back({p.latitude, p.longitude});
  for (const auto& e : epicenters) to.push_back({e.latitude, e.longitude});

  MapComparison out;
  out.nearest_km = kernels::nearest_distances(from, to);

  double weighted = 0.0, weight = 0.0;
  std::vector<double> severity, inverse;
  for (std::size_t i = 0; i < points.size(); ++i) {
    weighted += static_cast<double>(points[i].count) * out.nearest_km[i];
    weight += static_cast<double>(points[i].count);
    severity.push_back(points[i].severity);
    inverse.push_back(out.nearest_km[i] > 0.0 ? 1.0 / out.nearest_km[i]
                                              : std::numeric_limits<double>::infinity());
  }
  out.weighted_mean_km = weight > 0.0 ? weighted / weight : 0.0;
  out.rank_correlation = spearman(severity, inverse);
  return out;
}

std::map<std::chrono::sys_days, std::uint64_t> timeline(std::span<const CleanTweet> tweets) {
  using namespace std::chrono;
  std::map<sys_days, std::uint64_t> out;
  if (tweets.empty()) return out;
  for (const auto& t : tweets) ++out[floor<days>(t.timestamp)];
  auto first = out.begin()->first;
  auto last = out.rbegin()->first;
  for (auto d = first; d <= last; d += days{1}) out.try_emplace(d, 0);
  return out;
}

std::string timeline_csv(const std::map<std::chrono::sys_days, std::uint64_t>& counts) {
  std::string out = "date,count\n";
  for (const auto& [day, n] : counts) out += format_date(day) + "," + std::to_string(n) + "\n";
  return out;
}

}  // namespace quakeloc
