#pragma once

#include <Eigen/Dense>

namespace spin_atlas {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

/// Unit vector in the lab frame. Lab z is the applied-field direction and
/// coincides with one <111> crystal axis.
class Axis {
 public:
  /// Lab z.
  Axis() = default;

  /// Throws InvalidInput unless |v| = 1 within 1e-12.
  static Axis from_unit(const Vec3& v);
  /// Normalizes v; throws InvalidInput for (near) zero vectors.
  static Axis normalized(const Vec3& v);
  /// Polar/azimuthal angles (radians) in the lab frame.
  static Axis from_angles(double polar, double azimuth);

  const Vec3& vector() const noexcept { return v_; }
  double dot(const Axis& other) const noexcept { return v_.dot(other.v_); }

  bool operator==(const Axis& other) const noexcept { return v_ == other.v_; }

 private:
  explicit Axis(const Vec3& v) : v_(v) {}
  Vec3 v_{0.0, 0.0, 1.0};
};

/// The four <111> axes of diamond with lab z on the first one. The three
/// others lie at cos(theta) = -1/3; axis 1 is placed in the lab x-z plane.
namespace tetrahedral {
Axis axis(int index);  // index in [0, 3]
inline Axis on_axis() { return axis(0); }
}  // namespace tetrahedral

/// Proper rotation carrying lab z onto `axis` along the shortest arc.
/// Column 2 of the result equals axis.vector().
Mat3 rotation_to(const Axis& axis);

/// Direction given in the local frame of `frame` (frame z = frame axis).
Axis axis_in_frame(const Axis& frame, double polar, double azimuth);

/// 3x3 real symmetric tensor in its principal frame plus the lab direction of
/// that frame's z axis.
struct InteractionTensor {
  Mat3 principal = Mat3::Zero();
  Axis axis;

  static InteractionTensor axial(double perpendicular, double parallel, const Axis& axis = {});
  static InteractionTensor diagonal(double xx, double yy, double zz, const Axis& axis = {});

  bool operator==(const InteractionTensor& other) const noexcept {
    return principal == other.principal && axis == other.axis;
  }
};

/// R t R^T with R = rotation_to(t.axis). Throws InvalidInput when the
/// principal matrix is not symmetric within 1e-12.
Mat3 rotate_tensor(const InteractionTensor& t);

/// Same rotation for a raw axis vector; rejects non-unit axes.
Mat3 rotate_tensor(const Mat3& principal, const Vec3& axis);

}  // namespace spin_atlas
