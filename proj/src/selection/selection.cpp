#include "crossdrop/selection/selection.hpp"

#include <algorithm>
#include <numbers>

namespace crossdrop::selection {

std::optional<QuadHit> ray_quad_intersect(const Ray& ray, const DisplayProfile& display, double max_distance) {
  const Vec3 normal = display.normal();
  const double denom = ray.direction.dot(normal);
  if (std::abs(denom) < kParallelEpsilon) {
    return std::nullopt;
  }
  const Vec3& center = display.surface_pose.position;
  const double t = (center - ray.origin).dot(normal) / denom;
  if (!(t > 0.0) || t > max_distance) {
    return std::nullopt;
  }
  const Vec3 point = ray.origin + ray.direction * t;
  const Vec3 offset = point - center;
  if (std::abs(offset.dot(display.surface_pose.axis_x())) > display.width / 2.0 ||
      std::abs(offset.dot(display.surface_pose.axis_y())) > display.height / 2.0) {
    return std::nullopt;
  }
  return QuadHit{t, point};
}

std::optional<DisplayHit> select_display_by_palm(const Ray& ray, std::span<const DisplayProfile> displays,
                                                 const SelectionConfig& cfg) {
  std::optional<DisplayHit> best;
  for (const auto& display : displays) {
    const auto hit = ray_quad_intersect(ray, display, cfg.max_ray_distance);
    if (!hit) {
      continue;
    }
    const bool better = !best || hit->t < best->t - kTieEpsilon ||
                        (std::abs(hit->t - best->t) < kTieEpsilon && display.id < best->display_id);
    if (better) {
      best = DisplayHit{display.id, hit->point, hit->t};
    }
  }
  return best;
}

double gaze_angle(const Ray& gaze, const Vec3& point) noexcept {
  const Vec3 to_point = point - gaze.origin;
  return std::atan2(gaze.direction.cross(to_point).norm(), gaze.direction.dot(to_point));
}

std::optional<ContentId> select_content_by_gaze(const Ray& gaze, std::span<const GazeCandidate> candidates,
                                                const SelectionConfig& cfg) {
  const double cone = cfg.gaze_cone_half_angle * std::numbers::pi / 180.0;
  const GazeCandidate* best = nullptr;
  double best_angle = 0.0;
  double best_distance = 0.0;
  for (const auto& candidate : candidates) {
    const Vec3 to_center = candidate.world_center - gaze.origin;
    if (!(to_center.dot(gaze.direction) > 0.0)) {
      continue;
    }
    const double angle = gaze_angle(gaze, candidate.world_center);
    if (angle > cone) {
      continue;
    }
    const double dist = to_center.norm();
    bool better = best == nullptr || angle < best_angle - kTieEpsilon;
    if (!better && std::abs(angle - best_angle) < kTieEpsilon) {
      better = dist < best_distance - kTieEpsilon ||
               (std::abs(dist - best_distance) < kTieEpsilon && candidate.id < best->id);
    }
    if (better) {
      best = &candidate;
      best_angle = angle;
      best_distance = dist;
    }
  }
  if (best == nullptr) {
    return std::nullopt;
  }
  return best->id;
}

std::optional<ContentId> select_content_by_grab(const Vec3& hand_pos, std::span<const GrabCandidate> candidates,
                                                const SelectionConfig& cfg) {
  const GrabCandidate* best = nullptr;
  double best_distance = 0.0;
  for (const auto& candidate : candidates) {
    if (!candidate.world_bounds.contains(hand_pos, cfg.grab_radius)) {
      continue;
    }
    const double dist = distance(hand_pos, candidate.world_bounds.center);
    const bool better = best == nullptr || dist < best_distance - kTieEpsilon ||
                        (std::abs(dist - best_distance) < kTieEpsilon && candidate.id < best->id);
    if (better) {
      best = &candidate;
      best_distance = dist;
    }
  }
  if (best == nullptr) {
    return std::nullopt;
  }
  return best->id;
}

}  // namespace crossdrop::selection
