#pragma once

// Core 3D geometry: rotation vectors, rigid transforms and the pinhole camera.
//
// Camera frame convention used throughout: x right, y down, z forward along
// the optical axis. All quantities are double precision, lengths in meters.

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace gazecone {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

// A direction with unit Euclidean norm. Construction normalizes.
class UnitVec3 {
 public:
  UnitVec3() : v_(Vec3::UnitZ()) {}
  // Throws std::invalid_argument for zero or non-finite input.
  static UnitVec3 normalized(const Vec3& v);
  // Wraps a vector already known to be unit length (checked to 1e-9).
  static UnitVec3 from_unit(const Vec3& v);

  const Vec3& vec() const { return v_; }
  double x() const { return v_.x(); }
  double y() const { return v_.y(); }
  double z() const { return v_.z(); }
  UnitVec3 operator-() const { return UnitVec3(-v_); }

 private:
  explicit UnitVec3(const Vec3& v) : v_(v) {}
  Vec3 v_;
};

// Axis-angle rotation: direction is the axis, norm is the angle in radians.
struct RotationVec {
  Vec3 axis_angle = Vec3::Zero();

  RotationVec() = default;
  explicit RotationVec(const Vec3& v) : axis_angle(v) {}
  RotationVec(double x, double y, double z) : axis_angle(x, y, z) {}

  double angle() const { return axis_angle.norm(); }
  // Equivalent rotation with angle in [0, pi].
  RotationVec canonical() const;
  RotationVec operator-() const { return RotationVec(-axis_angle); }
};

// Rodrigues' formula. Proper rotation for every input.
Mat3 rotation_to_matrix(const RotationVec& r);

// Inverse of rotation_to_matrix. Throws InvalidRotation unless `m` is
// orthonormal within 1e-6 with determinant +1. Result has angle in [0, pi].
RotationVec matrix_to_rotation(const Mat3& m);

// Skew-symmetric cross-product matrix: skew(a) * b == a.cross(b).
Mat3 skew(const Vec3& v);

// Geodesic distance between two rotations, radians in [0, pi].
double rotation_angle_between(const Mat3& a, const Mat3& b);

// x_out = R(rotation) * x_in + translation.
struct RigidTransform {
  RotationVec rotation;
  Vec3 translation = Vec3::Zero();

  RigidTransform() = default;
  RigidTransform(const RotationVec& r, const Vec3& t) : rotation(r), translation(t) {}

  static RigidTransform identity() { return {}; }
  static RigidTransform from_matrix(const Mat3& rotation, const Vec3& translation);

  Mat3 rotation_matrix() const { return rotation_to_matrix(rotation); }
};

Vec3 transform_apply(const RigidTransform& t, const Vec3& p);
RigidTransform transform_invert(const RigidTransform& t);
// Returns the transform equivalent to applying `b` first, then `a`.
RigidTransform transform_compose(const RigidTransform& a, const RigidTransform& b);

struct Pixel {
  double u = 0.0;
  double v = 0.0;
};

// Distortion-free pinhole intrinsics.
struct CameraIntrinsics {
  double fx = 900.0;
  double fy = 900.0;
  double cx = 640.0;
  double cy = 360.0;
  int width = 1280;
  int height = 720;

  // Throws std::invalid_argument when the invariants fail.
  void validate() const;
  bool contains(const Pixel& px) const {
    return px.u >= 0.0 && px.v >= 0.0 && px.u < width && px.v < height;
  }
};

// u = fx x/z + cx, v = fy y/z + cy. Throws BehindCamera for z <= 0.
Pixel project(const CameraIntrinsics& k, const Vec3& p_cam);

// Point on the viewing ray of `px` at the given depth.
Vec3 back_project(const CameraIntrinsics& k, const Pixel& px, double depth);

}  // namespace gazecone
