#include "crossdrop/core/error.hpp"
#include "crossdrop/core/json_io.hpp"
#include "crossdrop/core/overloaded.hpp"
#include "crossdrop/selection/selection.hpp"

namespace crossdrop::selection {

std::string_view to_string(PushPull action) { return action == PushPull::kPush ? "Push" : "Pull"; }

PushPull push_pull_from_string(std::string_view name) {
  if (name == "Push") {
    return PushPull::kPush;
  }
  if (name == "Pull") {
    return PushPull::kPull;
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown gesture action '" + std::string(name) + "'");
}

void to_json(nlohmann::json& j, const Ray& r) { j = {{"origin", r.origin}, {"direction", r.direction}}; }

void from_json(const nlohmann::json& j, Ray& r) {
  r.origin = j.at("origin").get<Vec3>();
  r.direction = j.at("direction").get<Vec3>();
}

void to_json(nlohmann::json& j, const GestureEvent& e) {
  nlohmann::json payload = std::visit(
      overloaded{
          [](const gesture::Grab& g) -> nlohmann::json { return {{"type", "Grab"}, {"hand_pos", g.hand_pos}}; },
          [](const gesture::Release& r) -> nlohmann::json {
            return {{"type", "Release"},
                    {"release_pose", r.release_pose},
                    {"ray", r.ray ? nlohmann::json(*r.ray) : nlohmann::json(nullptr)}};
          },
          [](const gesture::PalmRay& p) -> nlohmann::json {
            return {{"type", "PalmRay"}, {"ray", p.ray}, {"action", to_string(p.action)}};
          },
          [](const gesture::GazePinch& g) -> nlohmann::json {
            return {{"type", "GazePinch"}, {"gaze", g.gaze}, {"action", to_string(g.action)}};
          },
      },
      e.payload);
  j = {{"seq", e.seq}, {"time", e.time}, {"payload", std::move(payload)}};
}

void from_json(const nlohmann::json& j, GestureEvent& e) {
  e.seq = get_unsigned(j, "seq");
  e.time = j.at("time").get<double>();
  const auto& p = j.at("payload");
  const auto type = p.at("type").get<std::string>();
  if (type == "Grab") {
    e.payload = gesture::Grab{p.at("hand_pos").get<Vec3>()};
  } else if (type == "Release") {
    gesture::Release release{p.at("release_pose").get<Pose>(), std::nullopt};
    if (p.contains("ray") && !p.at("ray").is_null()) {
      release.ray = p.at("ray").get<Ray>();
    }
    e.payload = release;
  } else if (type == "PalmRay") {
    e.payload = gesture::PalmRay{p.at("ray").get<Ray>(), push_pull_from_string(p.at("action").get<std::string>())};
  } else if (type == "GazePinch") {
    e.payload = gesture::GazePinch{p.at("gaze").get<Ray>(), push_pull_from_string(p.at("action").get<std::string>())};
  } else {
    throw Error(ErrorCode::kInvalidArgument, "unknown gesture type '" + type + "'");
  }
}

}  // namespace crossdrop::selection
