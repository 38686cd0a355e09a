#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "crossdrop/core/math.hpp"

namespace crossdrop {

using ContentId = std::string;
using DisplayId = std::string;
using Rgba = std::array<std::uint8_t, 4>;

struct Appearance {
  Rgba color{255, 255, 255, 255};
  double opacity = 1.0;
  double scale = 1.0;

  friend bool operator==(const Appearance&, const Appearance&) = default;
};

struct Component {
  std::string id;
  Pose local_pose{};  // relative to the assembly origin
  Aabb bounds{};      // in the component's own frame
  std::string label;
  std::string detail_text;

  friend bool operator==(const Component&, const Component&) = default;
};

enum class ContentKind { kPrimitive, kAssembly, kVisualization };

struct ContentItem {
  ContentId id;
  ContentKind kind = ContentKind::kPrimitive;
  Aabb bounds{};
  std::vector<Component> components;  // non-empty iff kind == kAssembly
  Appearance appearance{};
  std::string title;

  friend bool operator==(const ContentItem&, const ContentItem&) = default;
};

enum class DisplayKind { kWallProjector, kTabletopTouch, kSmartphone, kLaptop, kMrHeadset };

enum class Audience { kEngineer, kDesigner, kManager, kGeneral };

// A planar quad centred on surface_pose; width runs along the pose's local +X,
// height along +Y, and the surface normal is local +Z.
struct DisplayProfile {
  DisplayId id;
  DisplayKind kind = DisplayKind::kLaptop;
  Pose surface_pose{};
  double width = 1.0;
  double height = 1.0;
  bool supports_3d = false;
  Audience audience = Audience::kGeneral;
  double opacity_multiplier = 1.0;

  Vec3 normal() const noexcept { return surface_pose.axis_z(); }

  friend bool operator==(const DisplayProfile&, const DisplayProfile&) = default;
};

enum class TransferDirection { kPlacement, kRetrieval };

inline constexpr std::array kAllContentKinds{ContentKind::kPrimitive, ContentKind::kAssembly,
                                             ContentKind::kVisualization};
inline constexpr std::array kAllDisplayKinds{DisplayKind::kWallProjector, DisplayKind::kTabletopTouch,
                                             DisplayKind::kSmartphone, DisplayKind::kLaptop,
                                             DisplayKind::kMrHeadset};
inline constexpr std::array kAllAudiences{Audience::kEngineer, Audience::kDesigner, Audience::kManager,
                                          Audience::kGeneral};

// Names match the serialized form ("Assembly", "WallProjector", "Engineer", ...).
std::string_view to_string(ContentKind kind);
std::string_view to_string(DisplayKind kind);
std::string_view to_string(Audience audience);
std::string_view to_string(TransferDirection direction);

// Throw Error{kInvalidArgument} on unknown names.
ContentKind content_kind_from_string(std::string_view name);
DisplayKind display_kind_from_string(std::string_view name);
Audience audience_from_string(std::string_view name);
TransferDirection transfer_direction_from_string(std::string_view name);

}  // namespace crossdrop
