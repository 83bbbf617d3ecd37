#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace quakeloc::csv {

using Row = std::vector<std::string>;

// RFC 4180 style parsing: quoted fields may contain separators, doubled
// quotes and line breaks. A trailing newline does not produce an empty row.
std::vector<Row> parse(std::string_view text, char sep = ',');

// Reads a header-first CSV file. Throws quakeloc::Error if the file is
// missing or has no header.
struct Table {
  Row header;
  std::vector<Row> rows;

  // Index of a column by case-insensitive header name.
  std::optional<std::size_t> column(std::string_view name) const;
};
Table read_table(const std::filesystem::path& path, char sep = ',');

std::string quote(std::string_view field, char sep = ',');
std::string format_row(const Row& row, char sep = ',');

}  // namespace quakeloc::csv
