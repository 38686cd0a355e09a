#include "crossdrop/transfer/transfer.hpp"

#include <algorithm>

#include "crossdrop/core/error.hpp"
#include "crossdrop/core/json_io.hpp"

namespace crossdrop::transfer {

namespace {

void require_policy(const TransferPolicy& policy) {
  if (!policy.is_valid()) {
    throw Error(ErrorCode::kInvalidArgument, "transfer policy needs duration > 0 and fit_fraction in (0,1]");
  }
}

void require_keyframe_values(double scale, double opacity, std::string_view what) {
  if (!(scale > 0.0) || !(opacity >= 0.0 && opacity <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, std::string(what) + " needs scale > 0 and opacity in [0,1]");
  }
}

double lerp(double a, double b, double e) noexcept { return a + (b - a) * e; }

}  // namespace

double fit_scale(const ContentItem& item, const DisplayProfile& display, const TransferPolicy& policy) {
  const double max_extent = 2.0 * item.bounds.max_half_extent();
  return policy.fit_fraction * std::min(display.width, display.height) / max_extent;
}

Vec3 anchor_position(const DisplayProfile& display, const TransferPolicy& policy, std::size_t slot) {
  const double lateral = static_cast<double>(slot % kStackColumns) * kStackStepFraction * display.width;
  return display.surface_pose.position + display.normal() * policy.anchor_offset +
         display.surface_pose.axis_x() * lateral;
}

TransferPlan plan_placement(std::string plan_id, const ContentItem& item, const Pose& release_pose,
                            const DisplayProfile& display, const Appearance& current, const TransferPolicy& policy,
                            std::size_t slot) {
  require_policy(policy);
  require_keyframe_values(current.scale, current.opacity, "current appearance");
  TransferPlan plan;
  plan.plan_id = std::move(plan_id);
  plan.content_id = item.id;
  plan.direction = TransferDirection::kPlacement;
  plan.start = {release_pose, current.scale, current.opacity};
  plan.end = {{anchor_position(display, policy, slot), release_pose.orientation},
              fit_scale(item, display, policy),
              current.opacity * display.opacity_multiplier};
  plan.duration = policy.duration;
  plan.easing = policy.easing;
  return plan;
}

TransferPlan plan_retrieval(std::string plan_id, const ContentItem& item, const PlacementState& state,
                            double displayed_scale, double displayed_opacity, const Pose& hand_pose,
                            const Appearance& original, const TransferPolicy& policy) {
  const auto* shown = std::get_if<Displayed>(&state);
  if (shown == nullptr) {
    throw Error(ErrorCode::kInvalidState, "content '" + item.id + "' is not displayed");
  }
  require_policy(policy);
  require_keyframe_values(displayed_scale, displayed_opacity, "displayed appearance");
  require_keyframe_values(original.scale, original.opacity, "original appearance");
  TransferPlan plan;
  plan.plan_id = std::move(plan_id);
  plan.content_id = item.id;
  plan.direction = TransferDirection::kRetrieval;
  plan.start = {shown->anchor_pose, displayed_scale, displayed_opacity};
  plan.end = {{hand_pose.position, shown->anchor_pose.orientation}, original.scale, original.opacity};
  plan.duration = policy.duration;
  plan.easing = policy.easing;
  return plan;
}

double ease(Easing easing, double u) noexcept {
  switch (easing) {
    case Easing::kLinear:
      return u;
    case Easing::kSmoothstep:
      return u * u * (3.0 - 2.0 * u);
  }
  return u;
}

Keyframe step_transit(const TransferPlan& plan, double t) {
  if (t < 0.0 || std::isnan(t)) {
    throw Error(ErrorCode::kInvalidArgument, "transit time must be >= 0");
  }
  const double u = std::clamp(t / plan.duration, 0.0, 1.0);
  if (u <= 0.0) {
    return plan.start;
  }
  if (u >= 1.0) {
    return plan.end;
  }
  const double e = ease(plan.easing, u);
  const Keyframe& a = plan.start;
  const Keyframe& b = plan.end;
  return {
      {a.pose.position + (b.pose.position - a.pose.position) * e, slerp(a.pose.orientation, b.pose.orientation, e)},
      lerp(a.scale, b.scale, e),
      lerp(a.opacity, b.opacity, e),
  };
}

std::string_view to_string(Easing easing) { return easing == Easing::kLinear ? "Linear" : "Smoothstep"; }

Easing easing_from_string(std::string_view name) {
  if (name == "Linear") {
    return Easing::kLinear;
  }
  if (name == "Smoothstep") {
    return Easing::kSmoothstep;
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown easing '" + std::string(name) + "'");
}

void to_json(nlohmann::json& j, const TransferPolicy& p) {
  j = {{"duration", p.duration},
       {"easing", to_string(p.easing)},
       {"fit_fraction", p.fit_fraction},
       {"anchor_offset", p.anchor_offset}};
}

void from_json(const nlohmann::json& j, TransferPolicy& p) {
  const TransferPolicy defaults;
  p.duration = j.value("duration", defaults.duration);
  p.easing = easing_from_string(j.value("easing", std::string(to_string(defaults.easing))));
  p.fit_fraction = j.value("fit_fraction", defaults.fit_fraction);
  p.anchor_offset = j.value("anchor_offset", defaults.anchor_offset);
}

void to_json(nlohmann::json& j, const Keyframe& k) {
  j = {{"pose", k.pose}, {"scale", k.scale}, {"opacity", k.opacity}};
}

void from_json(const nlohmann::json& j, Keyframe& k) {
  k.pose = j.at("pose").get<Pose>();
  k.scale = j.at("scale").get<double>();
  k.opacity = j.at("opacity").get<double>();
}

void to_json(nlohmann::json& j, const TransferPlan& p) {
  j = {{"plan_id", p.plan_id},
       {"content_id", p.content_id},
       {"direction", to_string(p.direction)},
       {"start", p.start},
       {"end", p.end},
       {"duration", p.duration},
       {"easing", to_string(p.easing)}};
}

void from_json(const nlohmann::json& j, TransferPlan& p) {
  p.plan_id = j.at("plan_id").get<std::string>();
  p.content_id = j.at("content_id").get<std::string>();
  p.direction = transfer_direction_from_string(j.at("direction").get<std::string>());
  p.start = j.at("start").get<Keyframe>();
  p.end = j.at("end").get<Keyframe>();
  p.duration = j.at("duration").get<double>();
  p.easing = easing_from_string(j.at("easing").get<std::string>());
}

}  // namespace crossdrop::transfer
