#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace quakeloc {

// ASCII-only case folding. Bytes >= 0x80 pass through unchanged, so folded
// UTF-8 stays valid UTF-8 and byte offsets are preserved.
char fold_char(char c);
std::string casefold(std::string_view s);

bool is_ascii(std::string_view s);

// Characters that make up a word for boundary tests and tokenization:
// [A-Za-z0-9'] plus any non-ASCII byte (part of a multibyte letter).
bool is_word_char(char c);

// True when [start, end) of text is not glued to a word character on
// either side.
bool at_word_boundaries(std::string_view text, std::size_t start, std::size_t end);

std::string_view trim(std::string_view s);
std::vector<std::string> split(std::string_view s, char sep);

// Number of Unicode code points in a UTF-8 string. Malformed bytes count
// as one code point each.
std::size_t utf8_length(std::string_view s);

// Byte offset <-> code point offset conversion for UTF-8 text.
std::size_t byte_to_char_offset(std::string_view s, std::size_t byte_offset);
std::size_t char_to_byte_offset(std::string_view s, std::size_t char_offset);

}  // namespace quakeloc
