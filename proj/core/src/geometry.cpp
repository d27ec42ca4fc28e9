#include "spin_atlas/geometry.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "spin_atlas/errors.hpp"

namespace spin_atlas {

namespace {
constexpr double kUnitTolerance = 1e-12;
constexpr double kSymmetryTolerance = 1e-12;
}  // namespace

Axis Axis::from_unit(const Vec3& v) {
  if (!v.allFinite() || std::abs(v.norm() - 1.0) > kUnitTolerance) {
    throw InvalidInput("axis must be a unit vector (|v| = " + std::to_string(v.norm()) + ")");
  }
  return Axis(v);
}

Axis Axis::normalized(const Vec3& v) {
  const double n = v.norm();
  if (!std::isfinite(n) || n < 1e-300) throw InvalidInput("axis vector has zero length");
  return Axis(v / n);
}

Axis Axis::from_angles(double polar, double azimuth) {
  return Axis::normalized(Vec3(std::sin(polar) * std::cos(azimuth),
                               std::sin(polar) * std::sin(azimuth), std::cos(polar)));
}

namespace tetrahedral {
Axis axis(int index) {
  const double c = -1.0 / 3.0;
  const double s = std::sqrt(8.0 / 9.0);
  switch (index) {
    case 0: return Axis{};
    case 1: return Axis::normalized(Vec3(s, 0.0, c));
    case 2: return Axis::normalized(Vec3(-0.5 * s, 0.5 * std::sqrt(3.0) * s, c));
    case 3: return Axis::normalized(Vec3(-0.5 * s, -0.5 * std::sqrt(3.0) * s, c));
    default: throw InvalidInput("tetrahedral axis index must be in [0, 3]");
  }
}
}  // namespace tetrahedral

Mat3 rotation_to(const Axis& axis) {
  const Vec3 z(0.0, 0.0, 1.0);
  const Vec3& n = axis.vector();
  const Vec3 v = z.cross(n);
  const double c = z.dot(n);
  if (v.norm() < 1e-15) {
    if (c > 0.0) return Mat3::Identity();
    // pi about lab x
    return Vec3(1.0, -1.0, -1.0).asDiagonal();
  }
  Mat3 vx;
  vx << 0.0, -v.z(), v.y(), v.z(), 0.0, -v.x(), -v.y(), v.x(), 0.0;
  return Mat3::Identity() + vx + vx * vx / (1.0 + c);
}

Axis axis_in_frame(const Axis& frame, double polar, double azimuth) {
  const Vec3 local(std::sin(polar) * std::cos(azimuth), std::sin(polar) * std::sin(azimuth),
                   std::cos(polar));
  return Axis::normalized(rotation_to(frame) * local);
}

InteractionTensor InteractionTensor::axial(double perpendicular, double parallel, const Axis& axis) {
  return diagonal(perpendicular, perpendicular, parallel, axis);
}

InteractionTensor InteractionTensor::diagonal(double xx, double yy, double zz, const Axis& axis) {
  InteractionTensor t;
  t.principal = Vec3(xx, yy, zz).asDiagonal();
  t.axis = axis;
  return t;
}

Mat3 rotate_tensor(const InteractionTensor& t) {
  if ((t.principal - t.principal.transpose()).cwiseAbs().maxCoeff() > kSymmetryTolerance) {
    throw InvalidInput("interaction tensor must be symmetric");
  }
  const Mat3 r = rotation_to(t.axis);
  Mat3 out = r * t.principal * r.transpose();
  return 0.5 * (out + out.transpose());
}

Mat3 rotate_tensor(const Mat3& principal, const Vec3& axis) {
  InteractionTensor t;
  t.principal = principal;
  t.axis = Axis::from_unit(axis);
  return rotate_tensor(t);
}

}  // namespace spin_atlas
