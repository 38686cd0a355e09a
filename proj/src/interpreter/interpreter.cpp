#include "crossdrop/interpreter/interpreter.hpp"

#include <cstdint>
#include <cstdio>

#include "crossdrop/core/error.hpp"
#include "crossdrop/core/json_io.hpp"
#include "crossdrop/core/world.hpp"

namespace crossdrop::interpreter {

namespace {

constexpr double kMaxExplosionFactor = 1e6;
constexpr int kBisectionSteps = 200;

std::uint64_t fnv1a64(std::string_view bytes) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const char c : bytes) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

Vec3 component_center(const Component& component) {
  return component.local_pose.transform_point(component.bounds.center);
}

bool explodes(RepresentationMode mode) {
  return mode == RepresentationMode::kExploded || mode == RepresentationMode::kSchematic;
}

}  // namespace

bool RuleMatch::matches(const ContentItem& item, const DisplayProfile& display) const noexcept {
  return (!content_kind || *content_kind == item.kind) && (!display_kind || *display_kind == display.kind) &&
         (!audience || *audience == display.audience);
}

RuleSet default_ruleset() {
  RuleSet set;
  set.rules = {
      Rule{{ContentKind::kAssembly, std::nullopt, Audience::kEngineer},
           {RepresentationMode::kExploded, kDefaultExplosionFactor, true, true, true},
           10},
      Rule{{ContentKind::kAssembly, std::nullopt, Audience::kDesigner},
           {RepresentationMode::kDesignEmphasis, 0.0, true, false, true},
           10},
      Rule{{ContentKind::kAssembly, std::nullopt, Audience::kManager},
           {RepresentationMode::kSummary, 0.0, false, false, true},
           10},
  };
  set.fallback = {RepresentationMode::kAssembled, 0.0, false, false, true};
  return set;
}

const Produce& match_rule(const RuleSet& ruleset, const ContentItem& item, const DisplayProfile& display) {
  const Rule* best = nullptr;
  for (const auto& rule : ruleset.rules) {
    if (rule.match.matches(item, display) && (best == nullptr || rule.priority > best->priority)) {
      best = &rule;
    }
  }
  return best != nullptr ? best->produce : ruleset.fallback;
}

std::vector<ComponentPose> explode_assembly(const ContentItem& item, const Pose& base_pose, double scale,
                                            double explosion_factor) {
  if (item.kind != ContentKind::kAssembly || item.components.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "content '" + item.id + "' is not an assembly");
  }
  if (!(explosion_factor >= 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "explosion factor must be >= 0");
  }
  if (!(scale > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "scale must be positive");
  }
  Vec3 centroid{};
  for (const auto& component : item.components) {
    centroid = centroid + component_center(component);
  }
  centroid = centroid / static_cast<double>(item.components.size());

  std::vector<ComponentPose> out;
  out.reserve(item.components.size());
  for (const auto& component : item.components) {
    const Vec3 offset = (component_center(component) - centroid) * explosion_factor;
    const Vec3 local = component.local_pose.position + offset;
    out.push_back({component.id,
                   {base_pose.transform_point(local * scale), base_pose.orientation * component.local_pose.orientation}});
  }
  return out;
}

std::vector<Aabb> exploded_component_bounds(const ContentItem& item, const Pose& base_pose, double scale,
                                            double explosion_factor) {
  const auto poses = explode_assembly(item, base_pose, scale, explosion_factor);
  std::vector<Aabb> out;
  out.reserve(poses.size());
  for (std::size_t i = 0; i < poses.size(); ++i) {
    out.push_back(transformed_bounds(item.components[i].bounds, poses[i].world_pose, scale));
  }
  return out;
}

double exploded_overlap_volume(const ContentItem& item, const Pose& base_pose, double scale, double explosion_factor) {
  const auto boxes = exploded_component_bounds(item, base_pose, scale, explosion_factor);
  double total = 0.0;
  for (std::size_t i = 0; i < boxes.size(); ++i) {
    for (std::size_t j = i + 1; j < boxes.size(); ++j) {
      total += intersection_volume(boxes[i], boxes[j]);
    }
  }
  return total;
}

double separating_explosion_factor(const ContentItem& item, const Pose& base_pose, double scale) {
  if (exploded_overlap_volume(item, base_pose, scale, 0.0) == 0.0) {
    return 0.0;
  }
  double lo = 0.0;
  double hi = 1.0;
  while (exploded_overlap_volume(item, base_pose, scale, hi) > 0.0) {
    lo = hi;
    hi *= 2.0;
    if (hi > kMaxExplosionFactor) {
      throw Error(ErrorCode::kInvalidArgument, "components of '" + item.id + "' cannot be separated by explosion");
    }
  }
  // Overlap is non-increasing in e, so bisection converges on the boundary.
  for (int step = 0; step < kBisectionSteps && hi - lo > 0.0; ++step) {
    const double mid = lo + (hi - lo) / 2.0;
    if (mid <= lo || mid >= hi) {
      break;
    }
    if (exploded_overlap_volume(item, base_pose, scale, mid) > 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return hi;
}

Representation interpret(const ContentItem& item, const DisplayProfile& display, const RuleSet& ruleset,
                         const Appearance& adapted_appearance, const Pose& anchor) {
  const Produce& produce = match_rule(ruleset, item, display);
  const bool is_assembly = item.kind == ContentKind::kAssembly;

  Representation rep;
  rep.mode = produce.mode;
  if (!is_assembly && explodes(rep.mode)) {
    rep.mode = RepresentationMode::kAssembled;
  }
  rep.appearance = adapted_appearance;
  if (rep.mode == RepresentationMode::kSchematic) {
    rep.appearance.color = kSchematicColor;
  }
  rep.title_visible = produce.title;
  if (is_assembly) {
    const double e = explodes(rep.mode) ? produce.explosion_factor : 0.0;
    const bool details = produce.details || rep.mode == RepresentationMode::kSchematic;
    for (auto& placed : explode_assembly(item, anchor, adapted_appearance.scale, e)) {
      rep.component_placements.push_back({std::move(placed.component_id), placed.world_pose, produce.labels, details});
    }
  }

  const nlohmann::json key{{"item", item},
                           {"display", display},
                           {"produce", produce},
                           {"appearance", adapted_appearance},
                           {"anchor", anchor}};
  char hex[17];
  std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(fnv1a64(key.dump())));
  rep.representation_id = std::string("rep-") + hex;
  return rep;
}

std::string_view to_string(RepresentationMode mode) {
  switch (mode) {
    case RepresentationMode::kAssembled:
      return "Assembled";
    case RepresentationMode::kExploded:
      return "Exploded";
    case RepresentationMode::kSchematic:
      return "Schematic";
    case RepresentationMode::kDesignEmphasis:
      return "DesignEmphasis";
    case RepresentationMode::kSummary:
      return "Summary";
  }
  return "?";
}

RepresentationMode representation_mode_from_string(std::string_view name) {
  for (const auto mode : kAllModes) {
    if (to_string(mode) == name) {
      return mode;
    }
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown representation mode '" + std::string(name) + "'");
}

void to_json(nlohmann::json& j, const ComponentPlacement& c) {
  j = {{"component_id", c.component_id},
       {"world_pose", c.world_pose},
       {"label_visible", c.label_visible},
       {"detail_visible", c.detail_visible}};
}

void from_json(const nlohmann::json& j, ComponentPlacement& c) {
  c.component_id = j.at("component_id").get<std::string>();
  c.world_pose = j.at("world_pose").get<Pose>();
  c.label_visible = j.at("label_visible").get<bool>();
  c.detail_visible = j.at("detail_visible").get<bool>();
}

void to_json(nlohmann::json& j, const Representation& r) {
  j = {{"representation_id", r.representation_id},
       {"mode", to_string(r.mode)},
       {"appearance", r.appearance},
       {"component_placements", r.component_placements},
       {"title_visible", r.title_visible}};
}

void from_json(const nlohmann::json& j, Representation& r) {
  r.representation_id = j.at("representation_id").get<std::string>();
  r.mode = representation_mode_from_string(j.at("mode").get<std::string>());
  r.appearance = j.at("appearance").get<Appearance>();
  r.component_placements = j.at("component_placements").get<std::vector<ComponentPlacement>>();
  r.title_visible = j.at("title_visible").get<bool>();
}

}  // namespace crossdrop::interpreter
