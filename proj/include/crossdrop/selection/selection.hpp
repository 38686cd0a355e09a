#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "crossdrop/core/math.hpp"
#include "crossdrop/core/model.hpp"

namespace crossdrop::selection {

struct Ray {
  Vec3 origin{};
  Vec3 direction{0, 0, 1};  // unit length

  bool is_valid() const noexcept {
    return origin.is_finite() && direction.is_finite() && std::abs(direction.norm() - 1.0) <= 1e-6;
  }

  friend bool operator==(const Ray&, const Ray&) = default;
};

enum class PushPull { kPush, kPull };

namespace gesture {

struct Grab {
  Vec3 hand_pos{};
  friend bool operator==(const Grab&, const Grab&) = default;
};

// Without a ray the release targets the display the hand is physically at.
struct Release {
  Pose release_pose{};
  std::optional<Ray> ray;
  friend bool operator==(const Release&, const Release&) = default;
};

struct PalmRay {
  Ray ray{};
  PushPull action = PushPull::kPush;
  friend bool operator==(const PalmRay&, const PalmRay&) = default;
};

struct GazePinch {
  Ray gaze{};
  PushPull action = PushPull::kPush;
  friend bool operator==(const GazePinch&, const GazePinch&) = default;
};

}  // namespace gesture

using GesturePayload = std::variant<gesture::Grab, gesture::Release, gesture::PalmRay, gesture::GazePinch>;

struct GestureEvent {
  std::uint64_t seq = 0;
  double time = 0.0;  // seconds
  GesturePayload payload;

  friend bool operator==(const GestureEvent&, const GestureEvent&) = default;
};

struct SelectionConfig {
  double grab_radius = 0.15;          // m
  double gaze_cone_half_angle = 5.0;  // degrees
  double max_ray_distance = 50.0;     // m

  bool is_valid() const noexcept {
    return grab_radius > 0 && gaze_cone_half_angle > 0 && gaze_cone_half_angle < 90 && max_ray_distance > 0;
  }
};

// Parameters below this are treated as equal and resolved by id.
inline constexpr double kTieEpsilon = 1e-9;
// |direction . normal| below this counts as parallel to the display plane.
inline constexpr double kParallelEpsilon = 1e-9;

struct QuadHit {
  double t = 0.0;
  Vec3 point{};
};

// Two-sided ray/quad test. Misses when the ray is parallel to the plane, the
// plane lies behind the origin or beyond max_distance, or the plane point is
// outside the quad's width x height extents.
std::optional<QuadHit> ray_quad_intersect(const Ray& ray, const DisplayProfile& display,
                                          double max_distance = std::numeric_limits<double>::infinity());

struct DisplayHit {
  DisplayId display_id;
  Vec3 hit_point{};
  double t = 0.0;

  friend bool operator==(const DisplayHit&, const DisplayHit&) = default;
};

// Nearest intersected display; near-equal distances go to the smaller id.
std::optional<DisplayHit> select_display_by_palm(const Ray& ray, std::span<const DisplayProfile> displays,
                                                 const SelectionConfig& cfg);

struct GazeCandidate {
  ContentId id;
  Vec3 world_center{};
};

// Angle in radians between the gaze direction and the direction to `point`.
double gaze_angle(const Ray& gaze, const Vec3& point) noexcept;

// Candidate inside the gaze cone with the smallest angular deviation; ties by
// distance, then id.
std::optional<ContentId> select_content_by_gaze(const Ray& gaze, std::span<const GazeCandidate> candidates,
                                                const SelectionConfig& cfg);

struct GrabCandidate {
  ContentId id;
  Aabb world_bounds{};
};

// Candidate whose bounds, inflated by grab_radius, contain the hand; nearest
// centre wins, ties by id.
std::optional<ContentId> select_content_by_grab(const Vec3& hand_pos, std::span<const GrabCandidate> candidates,
                                                const SelectionConfig& cfg);

// Many rays against one scene. The plain versions run an OpenMP parallel loop
// over rays; the *_serial versions are the single-threaded reference.
std::vector<std::optional<DisplayHit>> select_displays_by_palm_batch(std::span<const Ray> rays,
                                                                     std::span<const DisplayProfile> displays,
                                                                     const SelectionConfig& cfg);
std::vector<std::optional<DisplayHit>> select_displays_by_palm_batch_serial(std::span<const Ray> rays,
                                                                            std::span<const DisplayProfile> displays,
                                                                            const SelectionConfig& cfg);
std::vector<std::optional<ContentId>> select_contents_by_gaze_batch(std::span<const Ray> gazes,
                                                                    std::span<const GazeCandidate> candidates,
                                                                    const SelectionConfig& cfg);
std::vector<std::optional<ContentId>> select_contents_by_gaze_batch_serial(std::span<const Ray> gazes,
                                                                           std::span<const GazeCandidate> candidates,
                                                                           const SelectionConfig& cfg);

std::string_view to_string(PushPull action);
PushPull push_pull_from_string(std::string_view name);

void to_json(nlohmann::json& j, const Ray& r);
void from_json(const nlohmann::json& j, Ray& r);
void to_json(nlohmann::json& j, const GestureEvent& e);
void from_json(const nlohmann::json& j, GestureEvent& e);

}  // namespace crossdrop::selection
