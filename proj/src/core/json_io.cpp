#include "crossdrop/core/json_io.hpp"

#include <fstream>
#include <sstream>

#include "crossdrop/core/error.hpp"
#include "crossdrop/core/overloaded.hpp"

namespace crossdrop {

void to_json(json& j, const Vec3& v) { j = json{{"x", v.x}, {"y", v.y}, {"z", v.z}}; }

void from_json(const json& j, Vec3& v) {
  v = {j.at("x").get<double>(), j.at("y").get<double>(), j.at("z").get<double>()};
}

void to_json(json& j, const UnitQuat& q) { j = json{{"w", q.w}, {"x", q.x}, {"y", q.y}, {"z", q.z}}; }

void from_json(const json& j, UnitQuat& q) {
  q = {j.at("w").get<double>(), j.at("x").get<double>(), j.at("y").get<double>(), j.at("z").get<double>()};
}

void to_json(json& j, const Pose& p) { j = json{{"position", p.position}, {"orientation", p.orientation}}; }

void from_json(const json& j, Pose& p) {
  p.position = j.at("position").get<Vec3>();
  p.orientation = j.contains("orientation") ? j.at("orientation").get<UnitQuat>() : UnitQuat::identity();
}

void to_json(json& j, const Aabb& b) { j = json{{"center", b.center}, {"half_extents", b.half_extents}}; }

void from_json(const json& j, Aabb& b) {
  b.center = j.at("center").get<Vec3>();
  b.half_extents = j.at("half_extents").get<Vec3>();
}

void to_json(json& j, const Appearance& a) {
  j = json{{"color", json::array({a.color[0], a.color[1], a.color[2], a.color[3]})},
           {"opacity", a.opacity},
           {"scale", a.scale}};
}

void from_json(const json& j, Appearance& a) {
  const json& color = j.at("color");
  if (!color.is_array() || color.size() != 4) {
    throw Error(ErrorCode::kInvalidArgument, "color must be a 4-element integer array");
  }
  for (std::size_t i = 0; i < 4; ++i) {
    if (!color[i].is_number_integer()) {
      throw Error(ErrorCode::kInvalidArgument, "color channels must be integers");
    }
    const auto channel = color[i].get<std::int64_t>();
    if (channel < 0 || channel > 255) {
      throw Error(ErrorCode::kInvalidArgument, "color channel out of range 0-255");
    }
    a.color[i] = static_cast<std::uint8_t>(channel);
  }
  a.opacity = j.at("opacity").get<double>();
  a.scale = j.at("scale").get<double>();
}

void to_json(json& j, const Component& c) {
  j = json{{"id", c.id},
           {"local_pose", c.local_pose},
           {"bounds", c.bounds},
           {"label", c.label},
           {"detail_text", c.detail_text}};
}

void from_json(const json& j, Component& c) {
  c.id = j.at("id").get<std::string>();
  c.local_pose = j.contains("local_pose") ? j.at("local_pose").get<Pose>() : Pose{};
  c.bounds = j.at("bounds").get<Aabb>();
  c.label = j.value("label", std::string{});
  c.detail_text = j.value("detail_text", std::string{});
}

void to_json(json& j, const ContentItem& item) {
  j = json{{"id", item.id},
           {"kind", to_string(item.kind)},
           {"bounds", item.bounds},
           {"components", item.components},
           {"appearance", item.appearance},
           {"title", item.title}};
}

void from_json(const json& j, ContentItem& item) {
  item.id = j.at("id").get<std::string>();
  item.kind = content_kind_from_string(j.at("kind").get<std::string>());
  item.bounds = j.at("bounds").get<Aabb>();
  item.components = j.contains("components") ? j.at("components").get<std::vector<Component>>()
                                             : std::vector<Component>{};
  item.appearance = j.at("appearance").get<Appearance>();
  item.title = j.value("title", std::string{});
}

void to_json(json& j, const DisplayProfile& d) {
  j = json{{"id", d.id},
           {"kind", to_string(d.kind)},
           {"surface_pose", d.surface_pose},
           {"width", d.width},
           {"height", d.height},
           {"supports_3d", d.supports_3d},
           {"audience", to_string(d.audience)},
           {"opacity_multiplier", d.opacity_multiplier}};
}

void from_json(const json& j, DisplayProfile& d) {
  d.id = j.at("id").get<std::string>();
  d.kind = display_kind_from_string(j.at("kind").get<std::string>());
  d.surface_pose = j.at("surface_pose").get<Pose>();
  d.width = j.at("width").get<double>();
  d.height = j.at("height").get<double>();
  d.supports_3d = j.value("supports_3d", false);
  d.audience = audience_from_string(j.at("audience").get<std::string>());
  d.opacity_multiplier = j.value("opacity_multiplier", 1.0);
}

void to_json(json& j, const PlacementState& s) {
  std::visit(overloaded{
                 [&](const InControl& c) { j = json{{"state", "InControl"}, {"hold_pose", c.hold_pose}}; },
                 [&](const InTransit& t) {
                   j = json{{"state", "InTransit"}, {"plan_id", t.plan_id}, {"direction", to_string(t.direction)}};
                 },
                 [&](const Displayed& d) {
                   j = json{{"state", "Displayed"},
                            {"display_id", d.display_id},
                            {"representation_id", d.representation_id},
                            {"anchor_pose", d.anchor_pose}};
                 },
             },
             s);
}

void from_json(const json& j, PlacementState& s) {
  const auto tag = j.at("state").get<std::string>();
  if (tag == "InControl") {
    s = InControl{j.at("hold_pose").get<Pose>()};
  } else if (tag == "InTransit") {
    s = InTransit{j.at("plan_id").get<std::string>(),
                  transfer_direction_from_string(j.at("direction").get<std::string>())};
  } else if (tag == "Displayed") {
    s = Displayed{j.at("display_id").get<std::string>(), j.at("representation_id").get<std::string>(),
                  j.at("anchor_pose").get<Pose>()};
  } else {
    throw Error(ErrorCode::kInvalidArgument, "unknown placement state '" + tag + "'");
  }
}

void to_json(json& j, const WorldState& w) {
  j = json{{"contents", w.contents}, {"placements", w.placements}, {"displays", w.displays}, {"seq", w.seq}};
}

void from_json(const json& j, WorldState& w) {
  w.contents = j.at("contents").get<std::map<ContentId, ContentItem>>();
  w.placements = j.at("placements").get<std::map<ContentId, PlacementState>>();
  w.displays = j.at("displays").get<std::map<DisplayId, DisplayProfile>>();
  w.seq = get_unsigned(j, "seq");
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::kConfigurationError, "cannot open '" + path.string() + "'");
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

std::uint64_t get_unsigned(const json& j, std::string_view key) {
  const json& v = j.at(key);
  if (!v.is_number_unsigned()) {
    throw Error(ErrorCode::kInvalidArgument, "'" + std::string(key) + "' must be a non-negative integer");
  }
  return v.get<std::uint64_t>();
}

std::size_t line_of_offset(std::string_view text, std::size_t offset) {
  offset = std::min(offset, text.size());
  return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(offset), '\n'));
}

std::vector<ContentItem> parse_content_library(std::string_view text, std::string_view source) {
  std::vector<ContentItem> items;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t end = std::min(text.find('\n', pos), text.size());
    const std::string_view line = text.substr(pos, end - pos);
    ++line_no;
    pos = end + 1;
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) {
      continue;
    }
    const std::string where = std::string(source) + ":" + std::to_string(line_no) + ": ";
    try {
      auto item = json::parse(line).get<ContentItem>();
      if (const auto report = validate_content(item); !report.ok()) {
        throw Error(ErrorCode::kConfigurationError, where + "content '" + item.id + "': " + report.violations.front());
      }
      items.push_back(std::move(item));
    } catch (const json::exception& e) {
      throw Error(ErrorCode::kConfigurationError, where + e.what());
    } catch (const Error& e) {
      if (e.code() == ErrorCode::kConfigurationError) {
        throw;
      }
      throw Error(ErrorCode::kConfigurationError, where + e.detail());
    }
  }
  return items;
}

std::vector<ContentItem> load_content_library(const std::filesystem::path& path) {
  return parse_content_library(read_text_file(path), path.string());
}

}  // namespace crossdrop
