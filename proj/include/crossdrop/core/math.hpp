#pragma once

#include <array>
#include <cmath>

namespace crossdrop {

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  constexpr Vec3 operator+(const Vec3& o) const noexcept { return {x + o.x, y + o.y, z + o.z}; }
  constexpr Vec3 operator-(const Vec3& o) const noexcept { return {x - o.x, y - o.y, z - o.z}; }
  constexpr Vec3 operator-() const noexcept { return {-x, -y, -z}; }
  constexpr Vec3 operator*(double s) const noexcept { return {x * s, y * s, z * s}; }
  constexpr Vec3 operator/(double s) const noexcept { return {x / s, y / s, z / s}; }

  constexpr double dot(const Vec3& o) const noexcept { return x * o.x + y * o.y + z * o.z; }
  constexpr Vec3 cross(const Vec3& o) const noexcept {
    return {y * o.z - z * o.y, z * o.x - x * o.z, x * o.y - y * o.x};
  }
  double norm() const noexcept { return std::sqrt(dot(*this)); }
  Vec3 normalized() const noexcept { return *this / norm(); }
  bool is_finite() const noexcept { return std::isfinite(x) && std::isfinite(y) && std::isfinite(z); }

  constexpr double operator[](int axis) const noexcept { return axis == 0 ? x : (axis == 1 ? y : z); }

  friend constexpr bool operator==(const Vec3&, const Vec3&) = default;
};

constexpr Vec3 operator*(double s, const Vec3& v) noexcept { return v * s; }

inline double distance(const Vec3& a, const Vec3& b) noexcept { return (a - b).norm(); }

struct UnitQuat {
  double w = 1.0;
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  static constexpr UnitQuat identity() noexcept { return {}; }
  // axis need not be normalized; angle in radians.
  static UnitQuat from_axis_angle(const Vec3& axis, double angle) noexcept;

  constexpr double dot(const UnitQuat& o) const noexcept { return w * o.w + x * o.x + y * o.y + z * o.z; }
  double norm() const noexcept { return std::sqrt(dot(*this)); }
  UnitQuat normalized() const noexcept;
  constexpr UnitQuat conjugate() const noexcept { return {w, -x, -y, -z}; }
  constexpr UnitQuat negated() const noexcept { return {-w, -x, -y, -z}; }
  bool is_unit(double tol = 1e-6) const noexcept { return std::abs(norm() - 1.0) <= tol; }

  UnitQuat operator*(const UnitQuat& o) const noexcept;
  Vec3 rotate(const Vec3& v) const noexcept;

  friend constexpr bool operator==(const UnitQuat&, const UnitQuat&) = default;
};

// Shortest-arc spherical interpolation; antipodal inputs are resolved by negating `to`.
UnitQuat slerp(const UnitQuat& from, const UnitQuat& to, double t) noexcept;

struct Pose {
  Vec3 position{};
  UnitQuat orientation{};

  Vec3 transform_point(const Vec3& local) const noexcept { return position + orientation.rotate(local); }
  Vec3 axis_x() const noexcept { return orientation.rotate({1, 0, 0}); }
  Vec3 axis_y() const noexcept { return orientation.rotate({0, 1, 0}); }
  Vec3 axis_z() const noexcept { return orientation.rotate({0, 0, 1}); }

  friend constexpr bool operator==(const Pose&, const Pose&) = default;
};

struct Aabb {
  Vec3 center{};
  Vec3 half_extents{0.5, 0.5, 0.5};

  bool is_valid() const noexcept {
    return center.is_finite() && half_extents.is_finite() && half_extents.x > 0 && half_extents.y > 0 &&
           half_extents.z > 0;
  }
  Vec3 min() const noexcept { return center - half_extents; }
  Vec3 max() const noexcept { return center + half_extents; }
  double max_half_extent() const noexcept;
  std::array<Vec3, 8> corners() const noexcept;
  Aabb inflated(double margin) const noexcept {
    return {center, half_extents + Vec3{margin, margin, margin}};
  }
  bool contains(const Vec3& p, double tol = 0.0) const noexcept;

  friend constexpr bool operator==(const Aabb&, const Aabb&) = default;
};

// Volume of the intersection box; zero for touching or disjoint boxes.
double intersection_volume(const Aabb& a, const Aabb& b) noexcept;

}  // namespace crossdrop
