#pragma once

#include <charconv>
#include <cstddef>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace wsa::detail {

struct KeyValueLine {
  std::size_t line = 0;
  std::string key;
  std::vector<std::string> values;
};

/// `key = v1 v2 ...` per line; `#` starts a comment. Throws ParseError.
std::vector<KeyValueLine> parse_key_values(std::string_view text);

double number_at(const KeyValueLine& kv, std::size_t index);
void expect_count(const KeyValueLine& kv, std::size_t count);

/// Streams the shortest text that reads back as the same double.
struct Shortest {
  double value;
};

inline std::ostream& operator<<(std::ostream& out, Shortest s) {
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), s.value);
  return out.write(buf, end - buf);
}

}  // namespace wsa::detail
