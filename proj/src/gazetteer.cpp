#include "quakeloc/gazetteer.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <unordered_set>

#include "quakeloc/error.hpp"
#include "quakeloc/text.hpp"

namespace quakeloc {

bool operator==(const LocationRecord& a, const LocationRecord& b) {
  return a.geoname_id == b.geoname_id && a.name == b.name && a.ascii_name == b.ascii_name &&
         a.alternate_names == b.alternate_names && a.latitude == b.latitude &&
         a.longitude == b.longitude && a.feature_class == b.feature_class &&
         a.country_code == b.country_code && a.population == b.population;
}

Gazetteer::Gazetteer(std::vector<LocationRecord> records) : records_(std::move(records)) {
  std::unordered_set<std::int64_t> ids;
  // folded name -> (is_primary, spelling) of the preferred display form
  std::map<std::string, std::pair<bool, std::string>> display;

  auto offer = [&](const std::string& spelling, bool primary) {
    auto key = casefold(spelling);
    auto [it, inserted] = display.try_emplace(key, primary, spelling);
    if (!inserted) {
      auto& [best_primary, best] = it->second;
      if ((primary && !best_primary) || (primary == best_primary && spelling < best)) {
        best_primary = primary;
        best = spelling;
      }
    }
    return key;
  };

  for (std::size_t i = 0; i < records_.size(); ++i) {
    const auto& r = records_[i];
    if (r.name.empty()) throw Error("location " + std::to_string(r.geoname_id) + " has no name");
    if (!(r.latitude >= -90.0 && r.latitude <= 90.0) ||
        !(r.longitude >= -180.0 && r.longitude <= 180.0)) {
      throw Error("location " + std::to_string(r.geoname_id) + " has out-of-range coordinates");
    }
    if (!ids.insert(r.geoname_id).second) {
      throw Error("duplicate geoname_id " + std::to_string(r.geoname_id));
    }

    auto add = [&](const std::string& spelling, bool primary) {
      if (trim(spelling).empty()) return;
      auto& slot = name_index_[offer(spelling, primary)];
      if (slot.empty() || slot.back() != i) slot.push_back(i);
    };
    add(r.name, true);
    for (const auto& alt : r.alternate_names) add(alt, false);
  }

  for (auto& [key, ids_for_name] : name_index_) {
    std::sort(ids_for_name.begin(), ids_for_name.end(), [&](std::size_t a, std::size_t b) {
      return records_[a].geoname_id < records_[b].geoname_id;
    });
    ids_for_name.erase(std::unique(ids_for_name.begin(), ids_for_name.end()), ids_for_name.end());
  }
  name_list_.reserve(display.size());
  for (auto& [key, entry] : display) name_list_.push_back(std::move(entry.second));
}

std::vector<const LocationRecord*> Gazetteer::lookup(std::string_view name) const {
  std::vector<const LocationRecord*> out;
  auto it = name_index_.find(casefold(name));
  if (it == name_index_.end()) return out;
  out.reserve(it->second.size());
  for (auto i : it->second) out.push_back(&records_[i]);
  return out;
}

const LocationRecord* Gazetteer::resolve(std::string_view name) const {
  const LocationRecord* best = nullptr;
  for (const auto* r : lookup(name)) {
    if (!best || r->population > best->population ||
        (r->population == best->population && r->geoname_id < best->geoname_id)) {
      best = r;
    }
  }
  return best;
}

bool Gazetteer::contains(std::string_view name) const {
  return name_index_.find(casefold(name)) != name_index_.end();
}

Gazetteer Gazetteer::merged_with(const Gazetteer& other) const {
  std::vector<LocationRecord> all = records_;
  std::unordered_set<std::int64_t> ids;
  for (const auto& r : records_) ids.insert(r.geoname_id);
  for (const auto& r : other.records_) {
    if (ids.insert(r.geoname_id).second) all.push_back(r);
  }
  return Gazetteer(std::move(all));
}

namespace {

template <typename T>
bool parse_number(std::string_view s, T& out) {
  s = trim(s);
  if (s.empty()) return false;
  auto r = std::from_chars(s.data(), s.data() + s.size(), out);
  return r.ec == std::errc{} && r.ptr == s.data() + s.size();
}

std::optional<LocationRecord> parse_row(std::string_view line) {
  auto fields = split(line, '\t');
  if (fields.size() < 15) return std::nullopt;

  LocationRecord r;
  if (!parse_number(fields[0], r.geoname_id)) return std::nullopt;
  r.name = fields[1];
  r.ascii_name = fields[2];
  if (!fields[3].empty()) {
    for (auto& alt : split(fields[3], ',')) {
      if (!alt.empty()) r.alternate_names.push_back(std::move(alt));
    }
  }
  if (!parse_number(fields[4], r.latitude) || !parse_number(fields[5], r.longitude)) {
    return std::nullopt;
  }
  if (!std::isfinite(r.latitude) || !std::isfinite(r.longitude) || r.latitude < -90.0 ||
      r.latitude > 90.0 || r.longitude < -180.0 || r.longitude > 180.0) {
    return std::nullopt;
  }
  if (fields[6].size() != 1) return std::nullopt;
  r.feature_class = fields[6][0];
  r.country_code = fields[8];
  auto pop = trim(fields[14]);
  if (pop.empty()) {
    r.population = 0;
  } else if (!parse_number(pop, r.population) || r.population < 0) {
    return std::nullopt;
  }
  if (trim(r.name).empty()) return std::nullopt;
  return r;
}

}  // namespace

Gazetteer load_geonames(const std::filesystem::path& path, const GeoNamesFilter& filter,
                        GeoNamesLoadStats* stats) {
  std::ifstream in(path);
  if (!in) throw Error("gazetteer file not found: " + path.string());

  GeoNamesLoadStats local;
  std::vector<LocationRecord> records;
  std::unordered_set<std::int64_t> ids;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    ++local.lines;
    auto rec = parse_row(line);
    if (!rec || !ids.insert(rec->geoname_id).second) {
      ++local.malformed;
      spdlog::debug("{}:{}: skipping malformed GeoNames row", path.string(), local.lines);
      continue;
    }
    if ((filter.countries && !filter.countries->count(rec->country_code)) ||
        (filter.feature_classes && !filter.feature_classes->count(rec->feature_class))) {
      ++local.filtered_out;
      continue;
    }
    records.push_back(std::move(*rec));
  }
  local.accepted = records.size();
  if (stats) *stats = local;
  if (records.empty()) {
    throw Error("gazetteer is empty after filtering: " + path.string());
  }
  if (local.malformed) {
    spdlog::warn("{}: {} malformed row(s) skipped", path.string(), local.malformed);
  }
  return Gazetteer(std::move(records));
}

bool validate_location(const Gazetteer& g, std::string_view candidate, GeocodeVerifier* verifier) {
  if (!g.contains(candidate)) return false;
  if (!verifier) return true;
  switch (verifier->confirm(candidate)) {
    case VerifyStatus::kConfirmed:
      return true;
    case VerifyStatus::kUnconfirmed:
      return false;
    case VerifyStatus::kUnavailable:
      spdlog::warn("geocoder unavailable; accepting '{}' on gazetteer evidence", candidate);
      return true;
  }
  return false;
}

}  // namespace quakeloc
