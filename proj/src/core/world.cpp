#include "crossdrop/core/world.hpp"

#include <algorithm>
#include <limits>
#include <set>

#include "crossdrop/core/error.hpp"

namespace crossdrop {

ValidationReport validate_content(const ContentItem& item) {
  ValidationReport report;
  auto& v = report.violations;
  if (item.id.empty()) {
    v.emplace_back("id must be non-empty");
  }
  if (!item.bounds.is_valid()) {
    v.emplace_back("bounds must have finite center and positive half extents");
  }
  if (item.kind == ContentKind::kAssembly && item.components.empty()) {
    v.emplace_back("assembly must have components");
  }
  if (item.kind != ContentKind::kAssembly && !item.components.empty()) {
    v.emplace_back("only assemblies may have components");
  }
  const double opacity = item.appearance.opacity;
  if (!(opacity >= 0.0 && opacity <= 1.0)) {
    v.emplace_back("opacity out of range");
  }
  if (!(item.appearance.scale > 0.0) || !std::isfinite(item.appearance.scale)) {
    v.emplace_back("scale must be positive");
  }
  std::set<std::string> seen;
  for (const auto& component : item.components) {
    if (component.id.empty()) {
      v.emplace_back("component id must be non-empty");
    } else if (!seen.insert(component.id).second) {
      v.emplace_back("duplicate component id '" + component.id + "'");
    }
    if (!component.bounds.is_valid()) {
      v.emplace_back("component '" + component.id + "' bounds invalid");
    }
    if (!component.local_pose.position.is_finite() || !component.local_pose.orientation.is_unit()) {
      v.emplace_back("component '" + component.id + "' local pose invalid");
    }
  }
  return report;
}

ValidationReport validate_display(const DisplayProfile& display) {
  ValidationReport report;
  auto& v = report.violations;
  if (display.id.empty()) {
    v.emplace_back("id must be non-empty");
  }
  if (!(display.width > 0.0) || !(display.height > 0.0) || !std::isfinite(display.width) ||
      !std::isfinite(display.height)) {
    v.emplace_back("width and height must be positive");
  }
  if (!(display.opacity_multiplier > 0.0 && display.opacity_multiplier <= 1.0)) {
    v.emplace_back("opacity multiplier out of range");
  }
  if (!display.surface_pose.position.is_finite() || !display.surface_pose.orientation.is_unit()) {
    v.emplace_back("surface pose invalid");
  }
  return report;
}

Aabb transformed_bounds(const Aabb& local, const Pose& pose, double scale) {
  if (!(scale > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "scale must be positive, got " + std::to_string(scale));
  }
  constexpr double kInf = std::numeric_limits<double>::infinity();
  Vec3 lo{kInf, kInf, kInf};
  Vec3 hi{-kInf, -kInf, -kInf};
  for (const Vec3& corner : local.corners()) {
    const Vec3 p = pose.transform_point(corner * scale);
    lo = {std::min(lo.x, p.x), std::min(lo.y, p.y), std::min(lo.z, p.z)};
    hi = {std::max(hi.x, p.x), std::max(hi.y, p.y), std::max(hi.z, p.z)};
  }
  return {(lo + hi) * 0.5, (hi - lo) * 0.5};
}

Aabb world_bounds(const ContentItem& item, const Pose& pose, double scale) {
  return transformed_bounds(item.bounds, pose, scale);
}

ValidationReport check_world(const WorldState& world) {
  ValidationReport report;
  for (const auto& [id, item] : world.contents) {
    if (!world.placements.contains(id)) {
      report.violations.push_back("content '" + id + "' has no placement state");
    }
    if (item.id != id) {
      report.violations.push_back("content keyed '" + id + "' has id '" + item.id + "'");
    }
  }
  for (const auto& [id, state] : world.placements) {
    if (!world.contents.contains(id)) {
      report.violations.push_back("placement for unknown content '" + id + "'");
    }
    if (const auto* shown = std::get_if<Displayed>(&state); shown && !world.displays.contains(shown->display_id)) {
      report.violations.push_back("content '" + id + "' displayed on unknown display '" + shown->display_id + "'");
    }
  }
  return report;
}

Pose default_hold_pose(std::size_t index) {
  return {{-0.6 + 0.3 * static_cast<double>(index % 5), 1.2, 0.4 + 0.3 * static_cast<double>(index / 5)},
          UnitQuat::identity()};
}

WorldState make_world(std::span<const ContentItem> items, std::span<const DisplayProfile> displays) {
  WorldState world;
  for (const auto& item : items) {
    if (const auto report = validate_content(item); !report.ok()) {
      throw Error(ErrorCode::kConfigurationError, "content '" + item.id + "': " + report.violations.front());
    }
    if (!world.contents.emplace(item.id, item).second) {
      throw Error(ErrorCode::kConfigurationError, "duplicate content id '" + item.id + "'");
    }
  }
  std::size_t index = 0;
  for (const auto& [id, item] : world.contents) {
    world.placements.emplace(id, InControl{default_hold_pose(index++)});
  }
  for (const auto& display : displays) {
    if (const auto report = validate_display(display); !report.ok()) {
      throw Error(ErrorCode::kConfigurationError, "display '" + display.id + "': " + report.violations.front());
    }
    if (!world.displays.emplace(display.id, display).second) {
      throw Error(ErrorCode::kConfigurationError, "duplicate display id '" + display.id + "'");
    }
  }
  return world;
}

}  // namespace crossdrop
