#include "wsa/labels.hpp"

#include <algorithm>

namespace wsa {

std::string_view label_name(Label label) {
  switch (label) {
    case Label::CulledCeiling: return "culled_ceiling";
    case Label::Floor: return "floor";
    case Label::ClearFloor: return "clear_floor";
    case Label::Clutter: return "clutter";
    case Label::Furniture: return "furniture";
    case Label::WorkSurface: return "work_surface";
    case Label::SurfaceClutter: return "surface_clutter";
    case Label::Other: return "other";
    case Label::Noise: return "noise";
    case Label::Unlabeled: return "unlabeled";
  }
  return "unlabeled";
}

std::optional<Label> parse_label(std::string_view name) {
  for (Label l : kAllLabels) {
    if (label_name(l) == name) return l;
  }
  return std::nullopt;
}

bool FaceLabelMap::set_if_unlabeled(FaceId f, Label l) {
  if (labels_[f] != Label::Unlabeled) return false;
  labels_[f] = l;
  return true;
}

std::vector<FaceId> FaceLabelMap::faces_with(Label l) const {
  std::vector<FaceId> out;
  for (FaceId f = 0; f < labels_.size(); ++f) {
    if (labels_[f] == l) out.push_back(f);
  }
  return out;
}

std::size_t FaceLabelMap::count(Label l) const {
  return static_cast<std::size_t>(std::count(labels_.begin(), labels_.end(), l));
}

bool FaceLabelMap::fully_labeled() const { return count(Label::Unlabeled) == 0; }

std::map<std::string, std::vector<FaceId>> FaceLabelMap::to_groups() const {
  std::map<std::string, std::vector<FaceId>> groups;
  for (FaceId f = 0; f < labels_.size(); ++f) {
    if (labels_[f] == Label::Unlabeled) continue;
    groups[std::string(label_name(labels_[f]))].push_back(f);
  }
  return groups;
}

FaceLabelMap FaceLabelMap::from_groups(const TriangleMesh& mesh) {
  FaceLabelMap map(mesh.faces.size(), Label::Other);
  for (const auto& [name, ids] : mesh.groups) {
    auto l = parse_label(name);
    if (!l) continue;
    for (FaceId f : ids) map.set(f, *l);
  }
  return map;
}

}  // namespace wsa
