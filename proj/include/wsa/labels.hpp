#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "wsa/mesh.hpp"

namespace wsa {

enum class Label : std::uint8_t {
  CulledCeiling,
  Floor,
  ClearFloor,
  Clutter,
  Furniture,
  WorkSurface,
  SurfaceClutter,
  Other,
  Noise,
  Unlabeled,  // only while a pipeline run is in progress
};

inline constexpr std::array<Label, 9> kAllLabels = {
    Label::CulledCeiling, Label::Floor,          Label::ClearFloor,
    Label::Clutter,       Label::Furniture,      Label::WorkSurface,
    Label::SurfaceClutter, Label::Other,         Label::Noise};

/// OBJ group name: culled_ceiling, floor, clear_floor, clutter, furniture,
/// work_surface, surface_clutter, other, noise.
std::string_view label_name(Label label);
std::optional<Label> parse_label(std::string_view name);

/// One label per face.
class FaceLabelMap {
 public:
  FaceLabelMap() = default;
  explicit FaceLabelMap(std::size_t faces, Label initial = Label::Unlabeled)
      : labels_(faces, initial) {}

  std::size_t size() const { return labels_.size(); }
  Label operator[](FaceId f) const { return labels_[f]; }
  void set(FaceId f, Label l) { labels_[f] = l; }
  /// Sets the label only when the face is still unlabeled.
  bool set_if_unlabeled(FaceId f, Label l);

  std::vector<FaceId> faces_with(Label l) const;
  std::size_t count(Label l) const;
  bool fully_labeled() const;
  const std::vector<Label>& raw() const { return labels_; }

  /// Mesh groups keyed by label name. Unlabeled faces stay ungrouped.
  std::map<std::string, std::vector<FaceId>> to_groups() const;
  /// Rebuilds labels from label-named groups; faces outside them become Other.
  static FaceLabelMap from_groups(const TriangleMesh& mesh);

  bool operator==(const FaceLabelMap&) const = default;

 private:
  std::vector<Label> labels_;
};

}  // namespace wsa
