#pragma once

#include <cstddef>
#include <string>

#include <json.hpp>

#include "crossdrop/core/lifecycle.hpp"
#include "crossdrop/core/math.hpp"
#include "crossdrop/core/model.hpp"

namespace crossdrop::transfer {

enum class Easing { kLinear, kSmoothstep };

struct TransferPolicy {
  double duration = 1.0;  // s
  Easing easing = Easing::kSmoothstep;
  double fit_fraction = 0.8;
  double anchor_offset = 0.05;  // m along the display normal

  bool is_valid() const noexcept { return duration > 0 && fit_fraction > 0 && fit_fraction <= 1; }

  friend bool operator==(const TransferPolicy&, const TransferPolicy&) = default;
};

// Pose, uniform scale and opacity of content at one end of a transfer.
struct Keyframe {
  Pose pose{};
  double scale = 1.0;
  double opacity = 1.0;

  friend bool operator==(const Keyframe&, const Keyframe&) = default;
};

// Colour is deliberately absent: transfers never touch it.
struct TransferPlan {
  std::string plan_id;
  ContentId content_id;
  TransferDirection direction = TransferDirection::kPlacement;
  Keyframe start{};
  Keyframe end{};
  double duration = 1.0;
  Easing easing = Easing::kSmoothstep;

  friend bool operator==(const TransferPlan&, const TransferPlan&) = default;
};

// Items stacked on one display step sideways by this fraction of its width,
// wrapping after kStackColumns items.
inline constexpr double kStackStepFraction = 0.1;
inline constexpr std::size_t kStackColumns = 5;

// fit_fraction * min(width, height) / (2 * largest half extent).
double fit_scale(const ContentItem& item, const DisplayProfile& display, const TransferPolicy& policy);

// Landing position for the `slot`-th item on a display: quad centre pushed out
// along the normal by anchor_offset, then shifted along the display's +X.
Vec3 anchor_position(const DisplayProfile& display, const TransferPolicy& policy, std::size_t slot = 0);

TransferPlan plan_placement(std::string plan_id, const ContentItem& item, const Pose& release_pose,
                            const DisplayProfile& display, const Appearance& current, const TransferPolicy& policy,
                            std::size_t slot = 0);

// `state` must be Displayed, otherwise Error{kInvalidState}. The plan starts at
// the display anchor with the displayed scale/opacity and ends at the hand with
// the original control-space scale/opacity, keeping the displayed orientation.
TransferPlan plan_retrieval(std::string plan_id, const ContentItem& item, const PlacementState& state,
                            double displayed_scale, double displayed_opacity, const Pose& hand_pose,
                            const Appearance& original, const TransferPolicy& policy);

double ease(Easing easing, double u) noexcept;

// Throws Error{kInvalidArgument} for t < 0. Exact endpoints at t = 0 and t >= duration.
Keyframe step_transit(const TransferPlan& plan, double t);

std::string_view to_string(Easing easing);
Easing easing_from_string(std::string_view name);

void to_json(nlohmann::json& j, const TransferPolicy& p);
void from_json(const nlohmann::json& j, TransferPolicy& p);
void to_json(nlohmann::json& j, const Keyframe& k);
void from_json(const nlohmann::json& j, Keyframe& k);
void to_json(nlohmann::json& j, const TransferPlan& p);
void from_json(const nlohmann::json& j, TransferPlan& p);

}  // namespace crossdrop::transfer
