#pragma once

#include <filesystem>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "wsa/mesh.hpp"

namespace wsa {

/// Parses Wavefront OBJ text. Only `v`, `f` and `g` carry meaning; texture
/// coordinates, normals, materials and other directives are skipped. Polygons
/// are fan-triangulated from their first corner, negative indices are resolved
/// against the vertices read so far, and a bare `g` returns to ungrouped.
/// Throws ParseError naming the offending line.
TriangleMesh parse_obj(std::string_view text);

TriangleMesh read_obj_file(const std::filesystem::path& path);

/// Writes vertices with 6 decimals, then faces in index order, emitting a `g`
/// line whenever the group changes. Face order and grouping survive a
/// parse_obj round trip.
void write_obj(const TriangleMesh& mesh, std::ostream& out);
std::string write_obj(const TriangleMesh& mesh);
void write_obj_file(const TriangleMesh& mesh, const std::filesystem::path& path);

/// Closed XY loops lifted to height `z`, written as `l` elements in one group.
void write_polyline_obj(const std::vector<std::vector<Vec2>>& loops, double z,
                        const std::string& group, std::ostream& out);

/// Fixed 6-decimal text for a coordinate; negative zero prints as zero.
std::string format_fixed6(double value);

}  // namespace wsa
