#include "keyvalue.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

#include "wsa/error.hpp"

namespace wsa::detail {

std::vector<KeyValueLine> parse_key_values(std::string_view text) {
  std::vector<KeyValueLine> out;
  std::size_t line_no = 0, pos = 0;
  while (pos < text.size()) {
    ++line_no;
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string line(text.substr(pos, end - pos));
    pos = end + 1;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;

    auto eq = line.find('=');
    if (eq == std::string::npos) throw ParseError(line_no, "expected 'key = value'");
    KeyValueLine kv;
    kv.line = line_no;
    std::istringstream key_stream(line.substr(0, eq));
    key_stream >> kv.key;
    std::string extra;
    if (kv.key.empty() || (key_stream >> extra)) throw ParseError(line_no, "malformed key");
    std::istringstream values(line.substr(eq + 1));
    for (std::string v; values >> v;) kv.values.push_back(v);
    if (kv.values.empty()) throw ParseError(line_no, "missing value for '" + kv.key + "'");
    out.push_back(std::move(kv));
  }
  return out;
}

double number_at(const KeyValueLine& kv, std::size_t index) {
  const std::string& s = kv.values.at(index);
  double v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) {
    throw ParseError(kv.line, "'" + kv.key + "': bad number '" + s + "'");
  }
  return v;
}

void expect_count(const KeyValueLine& kv, std::size_t count) {
  if (kv.values.size() != count) {
    throw ParseError(kv.line, "'" + kv.key + "' takes " + std::to_string(count) + " value(s), got " +
                                  std::to_string(kv.values.size()));
  }
}

}  // namespace wsa::detail
