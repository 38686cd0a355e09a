#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "crossdrop/core/math.hpp"
#include "crossdrop/core/model.hpp"

namespace crossdrop::interpreter {

enum class RepresentationMode { kAssembled, kExploded, kSchematic, kDesignEmphasis, kSummary };

inline constexpr std::array kAllModes{RepresentationMode::kAssembled, RepresentationMode::kExploded,
                                      RepresentationMode::kSchematic, RepresentationMode::kDesignEmphasis,
                                      RepresentationMode::kSummary};

// Schematic views drop the item's colour for this neutral grey.
inline constexpr Rgba kSchematicColor{200, 200, 200, 255};

struct ComponentPlacement {
  std::string component_id;
  Pose world_pose{};
  bool label_visible = false;
  bool detail_visible = false;

  friend bool operator==(const ComponentPlacement&, const ComponentPlacement&) = default;
};

struct Representation {
  std::string representation_id;
  RepresentationMode mode = RepresentationMode::kAssembled;
  Appearance appearance{};
  std::vector<ComponentPlacement> component_placements;  // non-empty iff the source is an assembly
  bool title_visible = true;

  friend bool operator==(const Representation&, const Representation&) = default;
};

struct RuleMatch {
  std::optional<ContentKind> content_kind;
  std::optional<DisplayKind> display_kind;
  std::optional<Audience> audience;

  bool matches(const ContentItem& item, const DisplayProfile& display) const noexcept;

  friend bool operator==(const RuleMatch&, const RuleMatch&) = default;
};

struct Produce {
  RepresentationMode mode = RepresentationMode::kAssembled;
  double explosion_factor = 0.0;
  bool labels = false;
  bool details = false;
  bool title = true;

  friend bool operator==(const Produce&, const Produce&) = default;
};

struct Rule {
  RuleMatch match;
  Produce produce;
  int priority = 0;

  friend bool operator==(const Rule&, const Rule&) = default;
};

struct RuleSet {
  std::vector<Rule> rules;
  Produce fallback;  // "default" in the file format

  friend bool operator==(const RuleSet&, const RuleSet&) = default;
};

// Explosion factor used by the shipped engineer rule.
inline constexpr double kDefaultExplosionFactor = 0.75;

// Engineers get an exploded view with labels and details, designers a
// colour/text emphasis with labels, managers a labelled-off summary.
// Identical to data/rules.default.json.
RuleSet default_ruleset();

// Highest-priority matching rule (earliest wins ties), else the fallback.
const Produce& match_rule(const RuleSet& ruleset, const ContentItem& item, const DisplayProfile& display);

struct ComponentPose {
  std::string component_id;
  Pose world_pose{};

  friend bool operator==(const ComponentPose&, const ComponentPose&) = default;
};

// Radial explosion: each component centre c_i moves to c + (1 + e)(c_i - c),
// c the mean centre, orientation kept, then the arrangement is scaled and
// placed by base_pose. Throws Error{kInvalidArgument} for non-assemblies or e < 0.
std::vector<ComponentPose> explode_assembly(const ContentItem& item, const Pose& base_pose, double scale,
                                            double explosion_factor);

// World-space bounds of every component at the given explosion factor.
std::vector<Aabb> exploded_component_bounds(const ContentItem& item, const Pose& base_pose, double scale,
                                            double explosion_factor);

// Sum of pairwise intersection volumes of the exploded component bounds.
double exploded_overlap_volume(const ContentItem& item, const Pose& base_pose, double scale, double explosion_factor);

// Smallest e (to bisection precision) with zero pairwise overlap, found by
// bisection. Throws Error{kInvalidArgument} when no e up to 1e6 separates.
double separating_explosion_factor(const ContentItem& item, const Pose& base_pose, double scale);

Representation interpret(const ContentItem& item, const DisplayProfile& display, const RuleSet& ruleset,
                         const Appearance& adapted_appearance, const Pose& anchor);

// Ruleset file: {"rules": [...], "default": {...}}. Errors are
// Error{kConfigurationError} carrying "<source>:<line>".
RuleSet parse_ruleset(std::string_view text, std::string_view source = "<memory>");
RuleSet load_ruleset(const std::filesystem::path& path);

std::string_view to_string(RepresentationMode mode);
RepresentationMode representation_mode_from_string(std::string_view name);

void to_json(nlohmann::json& j, const Produce& p);
void from_json(const nlohmann::json& j, Produce& p);
void to_json(nlohmann::json& j, const RuleMatch& m);
void from_json(const nlohmann::json& j, RuleMatch& m);
void to_json(nlohmann::json& j, const Rule& r);
void from_json(const nlohmann::json& j, Rule& r);
void to_json(nlohmann::json& j, const RuleSet& r);
void to_json(nlohmann::json& j, const ComponentPlacement& c);
void from_json(const nlohmann::json& j, ComponentPlacement& c);
void to_json(nlohmann::json& j, const Representation& r);
void from_json(const nlohmann::json& j, Representation& r);

}  // namespace crossdrop::interpreter
