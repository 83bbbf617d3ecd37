#include <doctest.h>

#include <random>

#include "helpers.hpp"
#include "quakeloc/csv.hpp"
#include "quakeloc/error.hpp"
#include "quakeloc/fingerprint.hpp"
#include "quakeloc/text.hpp"
#include "quakeloc/timeutil.hpp"

using namespace quakeloc;

TEST_CASE("casefold touches ASCII letters only") {
  CHECK(casefold("TóKYO 2024") == "t\xC3\xB3kyo 2024");
  CHECK(casefold("") == "");
  CHECK(fold_char('Q') == 'q');
  CHECK(fold_char('\xC3') == '\xC3');
}

TEST_CASE("word characters and boundaries") {
  CHECK(is_word_char('a'));
  CHECK(is_word_char('7'));
  CHECK(is_word_char('\''));
  CHECK(is_word_char('\xC5'));
  CHECK_FALSE(is_word_char('-'));
  CHECK_FALSE(is_word_char(' '));
  CHECK(at_word_boundaries("in Tokyo.", 3, 8));
  CHECK_FALSE(at_word_boundaries("Tokyoite", 0, 5));
  CHECK_FALSE(at_word_boundaries("Tokyo's", 0, 5));
  CHECK(at_word_boundaries("Tokyo-Osaka", 0, 5));
}

TEST_CASE("trim and split") {
  CHECK(trim("  a b \t\n") == "a b");
  CHECK(trim(" \t ") == "");
  CHECK(split("a,,b", ',') == std::vector<std::string>{"a", "", "b"});
  CHECK(split("", ',') == std::vector<std::string>{""});
}

TEST_CASE("code point offsets round trip") {
  std::string s = "Ka\xC5\x9F \xF0\x9F\x98\x80 x";  // "Kaş 😀 x"
  CHECK(utf8_length(s) == 7);
  CHECK(byte_to_char_offset(s, 4) == 3);
  CHECK(char_to_byte_offset(s, 3) == 4);
  CHECK(char_to_byte_offset(s, 5) == 9);
  for (std::size_t c = 0; c <= utf8_length(s); ++c) {
    CHECK(byte_to_char_offset(s, char_to_byte_offset(s, c)) == c);
  }
}

TEST_CASE("csv parsing handles quotes, separators and embedded newlines") {
  auto rows = csv::parse("id,content\n1,\"a, \"\"quoted\"\"\nline\"\n2,plain\n");
  REQUIRE(rows.size() == 3);
  CHECK(rows[1] == csv::Row{"1", "a, \"quoted\"\nline"});
  CHECK(rows[2] == csv::Row{"2", "plain"});
  CHECK(csv::parse("a,b").size() == 1);
  CHECK(csv::parse("").empty());
}

TEST_CASE("csv quoting round trips") {
  csv::Row row{"plain", "with,comma", "with \"quote\"", "multi\nline", ""};
  auto parsed = csv::parse(csv::format_row(row) + "\n");
  REQUIRE(parsed.size() == 1);
  CHECK(parsed[0] == row);
}

TEST_CASE("read_table finds columns case-insensitively and strips a BOM") {
  testing::TempDir dir("csv");
  testing::write_file(dir / "t.csv", "\xEF\xBB\xBFId,Content\n1,x\n");
  auto t = csv::read_table(dir / "t.csv");
  CHECK(t.column("id") == 0u);
  CHECK(t.column("CONTENT") == 1u);
  CHECK_FALSE(t.column("lang").has_value());
  CHECK(t.rows.size() == 1);
  CHECK_THROWS_AS(csv::read_table(dir / "missing.csv"), Error);
}

TEST_CASE("timestamps") {
  using namespace std::chrono;
  auto base = sys_days{year{2024} / January / 1};
  CHECK(parse_timestamp("2024-01-01") == Timestamp{base});
  CHECK(parse_timestamp("2024-01-01T16:10:09Z") == base + hours{16} + minutes{10} + seconds{9});
  CHECK(parse_timestamp("2024-01-01 16:10") == base + hours{16} + minutes{10});
  CHECK(parse_timestamp("2024-01-01T16:10:09.123Z") == base + hours{16} + minutes{10} + seconds{9});
  CHECK(parse_timestamp("2024-01-02T01:10:00+09:00") == base + hours{16} + minutes{10});
  CHECK(parse_timestamp("2024-01-01T11:10:00-0500") == base + hours{16} + minutes{10});
  CHECK_FALSE(parse_timestamp("2024-02-30").has_value());
  CHECK_FALSE(parse_timestamp("yesterday").has_value());
  CHECK_FALSE(parse_timestamp("2024-01-01T25:00").has_value());
  CHECK(format_timestamp(base + hours{7} + minutes{10} + seconds{9}) == "2024-01-01T07:10:09Z");
  CHECK(format_date(base) == "2024-01-01");
}

TEST_CASE("timestamp format and parse are inverse") {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 500; ++i) {
    Timestamp t{std::chrono::seconds{static_cast<long>(rng() % 4'000'000'000ULL)}};
    CHECK(parse_timestamp(format_timestamp(t)) == t);
  }
}

TEST_CASE("sha256") {
  CHECK(sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  testing::TempDir dir("sha");
  testing::write_file(dir / "f", "abc");
  CHECK(file_sha256(dir / "f") == sha256_hex("abc"));
}
