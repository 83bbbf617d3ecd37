#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "quakeloc/verifier.hpp"

namespace quakeloc {

struct LocationRecord {
  std::int64_t geoname_id = 0;
  std::string name;
  std::string ascii_name;
  std::vector<std::string> alternate_names;
  double latitude = 0.0;
  double longitude = 0.0;
  char feature_class = 'P';
  std::string country_code;
  std::int64_t population = 0;
};

bool operator==(const LocationRecord& a, const LocationRecord& b);

// Immutable index over a set of locations. Every record is reachable under
// its name and each alternate name, compared after ASCII case folding.
// The ASCII name column is kept on the record but not indexed.
class Gazetteer {
 public:
  Gazetteer() = default;
  // Throws quakeloc::Error on duplicate ids, empty names or out-of-range
  // coordinates.
  explicit Gazetteer(std::vector<LocationRecord> records);

  const std::vector<LocationRecord>& records() const { return records_; }
  std::size_t size() const { return records_.size(); }
  bool empty() const { return records_.empty(); }

  // Unique display names sorted by folded form. Where several spellings
  // fold together, a primary name wins over an alternate, then the
  // byte-wise smallest spelling.
  const std::vector<std::string>& name_list() const { return name_list_; }

  // Matching records in ascending geoname_id order.
  std::vector<const LocationRecord*> lookup(std::string_view name) const;

  // Highest population among lookup results; ties go to the smallest id.
  const LocationRecord* resolve(std::string_view name) const;

  bool contains(std::string_view name) const;

  // Union of two gazetteers; records with an id already present are kept
  // from *this.
  Gazetteer merged_with(const Gazetteer& other) const;

 private:
  std::vector<LocationRecord> records_;
  std::map<std::string, std::vector<std::size_t>, std::less<>> name_index_;
  std::vector<std::string> name_list_;
};

struct GeoNamesFilter {
  std::optional<std::set<std::string>> countries;     // ISO alpha-2, upper case
  std::optional<std::set<char>> feature_classes;
};

struct GeoNamesLoadStats {
  std::size_t lines = 0;
  std::size_t accepted = 0;
  std::size_t filtered_out = 0;
  std::size_t malformed = 0;
};

// Parses a GeoNames dump (tab separated, geonameid first). Malformed rows
// are skipped and counted. Throws quakeloc::Error if the file is missing
// or nothing survives the filters.
Gazetteer load_geonames(const std::filesystem::path& path, const GeoNamesFilter& filter = {},
                        GeoNamesLoadStats* stats = nullptr);

// Present in the gazetteer and, when a verifier is given, not rejected by
// it. An unavailable verifier counts as confirmation.
bool validate_location(const Gazetteer& g, std::string_view candidate,
                       GeocodeVerifier* verifier = nullptr);

}  // namespace quakeloc
