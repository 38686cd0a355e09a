#include "crossdrop/core/math.hpp"

#include <algorithm>

namespace crossdrop {

UnitQuat UnitQuat::from_axis_angle(const Vec3& axis, double angle) noexcept {
  const Vec3 n = axis.normalized();
  const double s = std::sin(angle / 2.0);
  return UnitQuat{std::cos(angle / 2.0), n.x * s, n.y * s, n.z * s}.normalized();
}

UnitQuat UnitQuat::normalized() const noexcept {
  const double n = norm();
  return {w / n, x / n, y / n, z / n};
}

UnitQuat UnitQuat::operator*(const UnitQuat& o) const noexcept {
  return {
      w * o.w - x * o.x - y * o.y - z * o.z,
      w * o.x + x * o.w + y * o.z - z * o.y,
      w * o.y - x * o.z + y * o.w + z * o.x,
      w * o.z + x * o.y - y * o.x + z * o.w,
  };
}

Vec3 UnitQuat::rotate(const Vec3& v) const noexcept {
  // v' = v + 2w(u x v) + 2u x (u x v), u = (x, y, z)
  const Vec3 u{x, y, z};
  const Vec3 t = u.cross(v) * 2.0;
  return v + t * w + u.cross(t);
}

UnitQuat slerp(const UnitQuat& from, const UnitQuat& to, double t) noexcept {
  UnitQuat target = to;
  double cos_theta = from.dot(to);
  if (cos_theta < 0.0) {
    target = to.negated();
    cos_theta = -cos_theta;
  }
  if (cos_theta > 0.9995) {
    const UnitQuat lerped{
        from.w + (target.w - from.w) * t,
        from.x + (target.x - from.x) * t,
        from.y + (target.y - from.y) * t,
        from.z + (target.z - from.z) * t,
    };
    return lerped.normalized();
  }
  const double theta = std::acos(std::min(cos_theta, 1.0));
  const double sin_theta = std::sin(theta);
  const double a = std::sin((1.0 - t) * theta) / sin_theta;
  const double b = std::sin(t * theta) / sin_theta;
  return UnitQuat{
      a * from.w + b * target.w,
      a * from.x + b * target.x,
      a * from.y + b * target.y,
      a * from.z + b * target.z,
  }
      .normalized();
}

double Aabb::max_half_extent() const noexcept {
  return std::max({half_extents.x, half_extents.y, half_extents.z});
}

std::array<Vec3, 8> Aabb::corners() const noexcept {
  std::array<Vec3, 8> out{};
  for (int i = 0; i < 8; ++i) {
    out[i] = {
        center.x + ((i & 1) ? half_extents.x : -half_extents.x),
        center.y + ((i & 2) ? half_extents.y : -half_extents.y),
        center.z + ((i & 4) ? half_extents.z : -half_extents.z),
    };
  }
  return out;
}

bool Aabb::contains(const Vec3& p, double tol) const noexcept {
  return std::abs(p.x - center.x) <= half_extents.x + tol && std::abs(p.y - center.y) <= half_extents.y + tol &&
         std::abs(p.z - center.z) <= half_extents.z + tol;
}

double intersection_volume(const Aabb& a, const Aabb& b) noexcept {
  double volume = 1.0;
  for (int axis = 0; axis < 3; ++axis) {
    const double lo = std::max(a.center[axis] - a.half_extents[axis], b.center[axis] - b.half_extents[axis]);
    const double hi = std::min(a.center[axis] + a.half_extents[axis], b.center[axis] + b.half_extents[axis]);
    if (hi <= lo) {
      return 0.0;
    }
    volume *= hi - lo;
  }
  return volume;
}

}  // namespace crossdrop
