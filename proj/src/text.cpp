#include "quakeloc/text.hpp"

#include <algorithm>

namespace quakeloc {

namespace {

// Length of the UTF-8 sequence introduced by a lead byte; 1 for ASCII and
// for bytes that cannot start a sequence.
std::size_t sequence_length(unsigned char lead) {
  if (lead < 0x80) return 1;
  if ((lead & 0xE0) == 0xC0) return 2;
  if ((lead & 0xF0) == 0xE0) return 3;
  if ((lead & 0xF8) == 0xF0) return 4;
  return 1;
}

std::size_t next_code_point(std::string_view s, std::size_t i) {
  std::size_t len = sequence_length(static_cast<unsigned char>(s[i]));
  if (i + len > s.size()) return i + 1;
  for (std::size_t k = 1; k < len; ++k) {
    if ((static_cast<unsigned char>(s[i + k]) & 0xC0) != 0x80) return i + 1;
  }
  return i + len;
}

}  // namespace

char fold_char(char c) {
  return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c;
}

std::string casefold(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), fold_char);
  return out;
}

bool is_ascii(std::string_view s) {
  return std::all_of(s.begin(), s.end(),
                     [](char c) { return static_cast<unsigned char>(c) < 0x80; });
}

bool is_word_char(char c) {
  auto u = static_cast<unsigned char>(c);
  return (u >= 'a' && u <= 'z') || (u >= 'A' && u <= 'Z') ||
         (u >= '0' && u <= '9') || u == '\'' || u >= 0x80;
}

bool at_word_boundaries(std::string_view text, std::size_t start, std::size_t end) {
  if (start > 0 && is_word_char(text[start - 1])) return false;
  if (end < text.size() && is_word_char(text[end])) return false;
  return true;
}

std::string_view trim(std::string_view s) {
  const char* ws = " \t\r\n\v\f";
  auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> parts;
  std::size_t pos = 0;
  while (true) {
    auto next = s.find(sep, pos);
    parts.emplace_back(s.substr(pos, next - pos));
    if (next == std::string_view::npos) break;
    pos = next + 1;
  }
  return parts;
}

std::size_t utf8_length(std::string_view s) {
  std::size_t n = 0;
  for (std::size_t i = 0; i < s.size(); i = next_code_point(s, i)) ++n;
  return n;
}

std::size_t byte_to_char_offset(std::string_view s, std::size_t byte_offset) {
  std::size_t n = 0;
  for (std::size_t i = 0; i < s.size() && i < byte_offset; i = next_code_point(s, i)) ++n;
  return n;
}

std::size_t char_to_byte_offset(std::string_view s, std::size_t char_offset) {
  std::size_t i = 0;
  for (std::size_t n = 0; n < char_offset && i < s.size(); ++n) i = next_code_point(s, i);
  return i;
}

}  // namespace quakeloc
