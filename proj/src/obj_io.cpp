#include "wsa/obj_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "wsa/error.hpp"

namespace wsa {
namespace {

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\v' || c == '\f'; }

std::vector<std::string_view> tokenize(std::string_view line) {
  std::vector<std::string_view> tokens;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && is_space(line[i])) ++i;
    std::size_t start = i;
    while (i < line.size() && !is_space(line[i])) ++i;
    if (i > start) tokens.push_back(line.substr(start, i - start));
  }
  return tokens;
}

bool parse_double(std::string_view s, double& out) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  if (s.empty()) return false;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size() && std::isfinite(out);
}

bool parse_index(std::string_view s, long long& out) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  if (s.empty()) return false;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

}  // namespace

TriangleMesh parse_obj(std::string_view text) {
  TriangleMesh mesh;
  std::vector<FaceId>* current_group = nullptr;
  std::vector<VertexId> polygon;

  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    ++line_no;
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;

    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    auto tokens = tokenize(line);
    if (tokens.empty()) continue;
    std::string_view key = tokens[0];

    if (key == "v") {
      std::size_t n = tokens.size() - 1;
      if (n != 3 && n != 4 && n != 6) {
        throw ParseError(line_no, "vertex needs 3 coordinates (optionally w or rgb), got " +
                                      std::to_string(n));
      }
      Vec3 p;
      for (int k = 0; k < 3; ++k) {
        if (!parse_double(tokens[k + 1], p[k])) {
          throw ParseError(line_no, "bad vertex coordinate '" + std::string(tokens[k + 1]) + "'");
        }
      }
      for (std::size_t k = 4; k <= n; ++k) {
        double ignored;
        if (!parse_double(tokens[k], ignored)) {
          throw ParseError(line_no, "bad vertex value '" + std::string(tokens[k]) + "'");
        }
      }
      if (mesh.vertices.size() >= std::numeric_limits<VertexId>::max()) {
        throw ParseError(line_no, "too many vertices");
      }
      mesh.vertices.push_back(p);
    } else if (key == "f") {
      if (tokens.size() < 4) {
        throw ParseError(line_no, "face needs at least 3 vertices, got " +
                                      std::to_string(tokens.size() - 1));
      }
      polygon.clear();
      const auto n = static_cast<long long>(mesh.vertices.size());
      for (std::size_t k = 1; k < tokens.size(); ++k) {
        std::string_view ref = tokens[k].substr(0, tokens[k].find('/'));
        long long idx = 0;
        if (!parse_index(ref, idx) || idx == 0) {
          throw ParseError(line_no, "bad face index '" + std::string(tokens[k]) + "'");
        }
        long long resolved = idx > 0 ? idx - 1 : n + idx;
        if (resolved < 0 || resolved >= n) {
          throw ParseError(line_no, "face index " + std::to_string(idx) + " out of range (" +
                                        std::to_string(n) + " vertices defined)");
        }
        polygon.push_back(static_cast<VertexId>(resolved));
      }
      for (std::size_t k = 1; k + 1 < polygon.size(); ++k) {
        Triangle t{polygon[0], polygon[k], polygon[k + 1]};
        if (t[0] == t[1] || t[1] == t[2] || t[0] == t[2]) {
          throw ParseError(line_no, "face repeats a vertex");
        }
        if (current_group) current_group->push_back(static_cast<FaceId>(mesh.faces.size()));
        mesh.faces.push_back(t);
      }
    } else if (key == "g") {
      if (tokens.size() == 1) {
        current_group = nullptr;
        continue;
      }
      std::string name(tokens[1]);
      for (std::size_t k = 2; k < tokens.size(); ++k) {
        name += ' ';
        name += tokens[k];
      }
      auto [it, inserted] = mesh.groups.try_emplace(name);
      current_group = &it->second;
    }
    // vt, vn, vp, l, o, s, mtllib, usemtl and anything else: skipped.
  }
  return mesh;
}

TriangleMesh read_obj_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_obj(ss.str());
}

std::string format_fixed6(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::fixed, 6);
  std::string s(buf, ptr);
  if (s == "-0.000000") s = "0.000000";
  return s;
}

namespace {

void append_fixed6(std::string& out, double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::fixed, 6);
  std::string_view s(buf, static_cast<std::size_t>(ptr - buf));
  if (s == "-0.000000") s = "0.000000";
  out.append(s);
}

void append_uint(std::string& out, std::uint64_t value) {
  char buf[24];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  out.append(buf, ptr);
}

}  // namespace

void write_obj(const TriangleMesh& mesh, std::ostream& out) {
  std::vector<const std::string*> group_of(mesh.faces.size(), nullptr);
  for (const auto& [name, ids] : mesh.groups) {
    for (FaceId f : ids) group_of[f] = &name;
  }

  std::string buf;
  buf.reserve(1 << 20);
  auto flush = [&] {
    out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
    buf.clear();
  };

  for (const auto& v : mesh.vertices) {
    buf += "v ";
    append_fixed6(buf, v.x());
    buf += ' ';
    append_fixed6(buf, v.y());
    buf += ' ';
    append_fixed6(buf, v.z());
    buf += '\n';
    if (buf.size() > (1 << 20)) flush();
  }

  const std::string* current = nullptr;
  for (std::size_t f = 0; f < mesh.faces.size(); ++f) {
    if (group_of[f] != current) {
      current = group_of[f];
      if (current) {
        buf += "g ";
        buf += *current;
        buf += '\n';
      } else {
        buf += "g\n";
      }
    }
    buf += 'f';
    for (VertexId v : mesh.faces[f]) {
      buf += ' ';
      append_uint(buf, std::uint64_t(v) + 1);
    }
    buf += '\n';
    if (buf.size() > (1 << 20)) flush();
  }
  flush();
}

std::string write_obj(const TriangleMesh& mesh) {
  std::ostringstream ss;
  write_obj(mesh, ss);
  return ss.str();
}

void write_obj_file(const TriangleMesh& mesh, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  write_obj(mesh, out);
  if (!out) throw Error("write failed for " + path.string());
}

void write_polyline_obj(const std::vector<std::vector<Vec2>>& loops, double z,
                        const std::string& group, std::ostream& out) {
  std::string buf;
  for (const auto& loop : loops) {
    for (const auto& p : loop) {
      buf += "v ";
      append_fixed6(buf, p.x());
      buf += ' ';
      append_fixed6(buf, p.y());
      buf += ' ';
      append_fixed6(buf, z);
      buf += '\n';
    }
  }
  buf += "g " + group + "\n";
  std::uint64_t base = 1;
  for (const auto& loop : loops) {
    if (loop.empty()) continue;
    buf += 'l';
    for (std::size_t k = 0; k < loop.size(); ++k) {
      buf += ' ';
      append_uint(buf, base + k);
    }
    buf += ' ';
    append_uint(buf, base);
    buf += '\n';
    base += loop.size();
  }
  out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
}

}  // namespace wsa
