#include "crossdrop/core/model.hpp"

#include <utility>

#include "crossdrop/core/error.hpp"

namespace crossdrop {

namespace {

template <typename Enum, std::size_t N>
using NameTable = std::array<std::pair<Enum, std::string_view>, N>;

constexpr NameTable<ContentKind, 3> kContentKindNames{{
    {ContentKind::kPrimitive, "Primitive"},
    {ContentKind::kAssembly, "Assembly"},
    {ContentKind::kVisualization, "Visualization"},
}};

constexpr NameTable<DisplayKind, 5> kDisplayKindNames{{
    {DisplayKind::kWallProjector, "WallProjector"},
    {DisplayKind::kTabletopTouch, "TabletopTouch"},
    {DisplayKind::kSmartphone, "Smartphone"},
    {DisplayKind::kLaptop, "Laptop"},
    {DisplayKind::kMrHeadset, "MrHeadset"},
}};

constexpr NameTable<Audience, 4> kAudienceNames{{
    {Audience::kEngineer, "Engineer"},
    {Audience::kDesigner, "Designer"},
    {Audience::kManager, "Manager"},
    {Audience::kGeneral, "General"},
}};

constexpr NameTable<TransferDirection, 2> kDirectionNames{{
    {TransferDirection::kPlacement, "Placement"},
    {TransferDirection::kRetrieval, "Retrieval"},
}};

constexpr NameTable<ErrorCode, 9> kErrorCodeNames{{
    {ErrorCode::kInvalidArgument, "invalid-argument"},
    {ErrorCode::kNotFound, "not-found"},
    {ErrorCode::kTransitionRejected, "transition-rejected"},
    {ErrorCode::kForbidden, "forbidden"},
    {ErrorCode::kInvalidState, "invalid-state"},
    {ErrorCode::kNoTarget, "no-target"},
    {ErrorCode::kProtocolError, "protocol-error"},
    {ErrorCode::kDesyncError, "desync-error"},
    {ErrorCode::kConfigurationError, "configuration-error"},
}};

template <typename Enum, std::size_t N>
std::string_view name_of(const NameTable<Enum, N>& table, Enum value) {
  for (const auto& [e, name] : table) {
    if (e == value) {
      return name;
    }
  }
  return "?";
}

template <typename Enum, std::size_t N>
Enum value_of(const NameTable<Enum, N>& table, std::string_view name, std::string_view what) {
  for (const auto& [e, n] : table) {
    if (n == name) {
      return e;
    }
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown " + std::string(what) + " '" + std::string(name) + "'");
}

}  // namespace

std::string_view to_string(ContentKind kind) { return name_of(kContentKindNames, kind); }
std::string_view to_string(DisplayKind kind) { return name_of(kDisplayKindNames, kind); }
std::string_view to_string(Audience audience) { return name_of(kAudienceNames, audience); }
std::string_view to_string(TransferDirection direction) { return name_of(kDirectionNames, direction); }
std::string_view to_string(ErrorCode code) { return name_of(kErrorCodeNames, code); }

ContentKind content_kind_from_string(std::string_view name) {
  return value_of(kContentKindNames, name, "content kind");
}
DisplayKind display_kind_from_string(std::string_view name) {
  return value_of(kDisplayKindNames, name, "display kind");
}
Audience audience_from_string(std::string_view name) { return value_of(kAudienceNames, name, "audience"); }
TransferDirection transfer_direction_from_string(std::string_view name) {
  return value_of(kDirectionNames, name, "transfer direction");
}
ErrorCode error_code_from_string(std::string_view name) { return value_of(kErrorCodeNames, name, "error code"); }

}  // namespace crossdrop
