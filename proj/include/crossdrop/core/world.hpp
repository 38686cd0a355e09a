#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "crossdrop/core/lifecycle.hpp"
#include "crossdrop/core/math.hpp"
#include "crossdrop/core/model.hpp"

namespace crossdrop {

struct ValidationReport {
  std::vector<std::string> violations;

  bool ok() const noexcept { return violations.empty(); }
};

ValidationReport validate_content(const ContentItem& item);
ValidationReport validate_display(const DisplayProfile& display);

// Axis-aligned enclosure of the 8 corners of `local` after scaling, rotating
// and translating by `pose`. Throws Error{kInvalidArgument} for scale <= 0.
Aabb transformed_bounds(const Aabb& local, const Pose& pose, double scale);
Aabb world_bounds(const ContentItem& item, const Pose& pose, double scale);

struct WorldState {
  std::map<ContentId, ContentItem> contents;
  std::map<ContentId, PlacementState> placements;
  std::map<DisplayId, DisplayProfile> displays;
  std::uint64_t seq = 0;

  friend bool operator==(const WorldState&, const WorldState&) = default;
};

// Key-set agreement between contents and placements, and every Displayed
// state pointing at a registered display.
ValidationReport check_world(const WorldState& world);

// Control-space resting pose for the i-th content in id order: a row in front
// of the operator at chest height.
Pose default_hold_pose(std::size_t index);

// Builds a world with every item InControl at its default hold pose.
// Throws Error{kConfigurationError} on invalid or duplicate items/displays.
WorldState make_world(std::span<const ContentItem> items, std::span<const DisplayProfile> displays);

}  // namespace crossdrop
