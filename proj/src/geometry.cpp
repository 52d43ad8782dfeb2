#include "gazecone/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "gazecone/errors.hpp"

namespace gazecone {

UnitVec3 UnitVec3::normalized(const Vec3& v) {
  const double n = v.norm();
  if (!(n > 0.0) || !std::isfinite(n)) {
    throw std::invalid_argument("cannot normalize a zero or non-finite vector");
  }
  return UnitVec3(v / n);
}

UnitVec3 UnitVec3::from_unit(const Vec3& v) {
  if (!(std::abs(v.norm() - 1.0) <= 1e-9)) {
    throw std::invalid_argument("vector is not unit length");
  }
  return UnitVec3(v);
}

RotationVec RotationVec::canonical() const {
  constexpr double kPi = std::numbers::pi;
  const double theta = angle();
  if (theta <= kPi) return *this;
  const Vec3 axis = axis_angle / theta;
  double wrapped = std::fmod(theta, 2.0 * kPi);
  if (wrapped > kPi) return RotationVec(-axis * (2.0 * kPi - wrapped));
  return RotationVec(axis * wrapped);
}

Mat3 skew(const Vec3& v) {
  Mat3 s;
  s << 0.0, -v.z(), v.y(),
       v.z(), 0.0, -v.x(),
      -v.y(), v.x(), 0.0;
  return s;
}

Mat3 rotation_to_matrix(const RotationVec& r) {
  const Vec3& w = r.axis_angle;
  const double theta2 = w.squaredNorm();
  const Mat3 k = skew(w);
  double a;  // sin(theta)/theta
  double b;  // (1 - cos(theta))/theta^2
  if (theta2 < 1e-12) {
    // Taylor expansion; error below 1e-24 at this range.
    a = 1.0 - theta2 / 6.0;
    b = 0.5 - theta2 / 24.0;
  } else {
    const double theta = std::sqrt(theta2);
    a = std::sin(theta) / theta;
    b = (1.0 - std::cos(theta)) / theta2;
  }
  return Mat3::Identity() + a * k + b * k * k;
}

RotationVec matrix_to_rotation(const Mat3& m) {
  const double orth_err = (m * m.transpose() - Mat3::Identity()).cwiseAbs().maxCoeff();
  if (!std::isfinite(orth_err) || orth_err > 1e-6) {
    throw InvalidRotation("matrix is not orthonormal");
  }
  if (std::abs(m.determinant() - 1.0) > 1e-6) {
    throw InvalidRotation("matrix determinant is not +1");
  }

  // Shepperd's method: pick the numerically largest quaternion component.
  const double trace = m.trace();
  double qw, qx, qy, qz;
  if (trace >= m(0, 0) && trace >= m(1, 1) && trace >= m(2, 2)) {
    const double s = std::sqrt(std::max(0.0, 1.0 + trace)) * 2.0;
    qw = 0.25 * s;
    qx = (m(2, 1) - m(1, 2)) / s;
    qy = (m(0, 2) - m(2, 0)) / s;
    qz = (m(1, 0) - m(0, 1)) / s;
  } else if (m(0, 0) >= m(1, 1) && m(0, 0) >= m(2, 2)) {
    const double s = std::sqrt(std::max(0.0, 1.0 + m(0, 0) - m(1, 1) - m(2, 2))) * 2.0;
    qw = (m(2, 1) - m(1, 2)) / s;
    qx = 0.25 * s;
    qy = (m(0, 1) + m(1, 0)) / s;
    qz = (m(0, 2) + m(2, 0)) / s;
  } else if (m(1, 1) >= m(2, 2)) {
    const double s = std::sqrt(std::max(0.0, 1.0 + m(1, 1) - m(0, 0) - m(2, 2))) * 2.0;
    qw = (m(0, 2) - m(2, 0)) / s;
    qx = (m(0, 1) + m(1, 0)) / s;
    qy = 0.25 * s;
    qz = (m(1, 2) + m(2, 1)) / s;
  } else {
    const double s = std::sqrt(std::max(0.0, 1.0 + m(2, 2) - m(0, 0) - m(1, 1))) * 2.0;
    qw = (m(1, 0) - m(0, 1)) / s;
    qx = (m(0, 2) + m(2, 0)) / s;
    qy = (m(1, 2) + m(2, 1)) / s;
    qz = 0.25 * s;
  }
  if (qw < 0.0) {
    qw = -qw;
    qx = -qx;
    qy = -qy;
    qz = -qz;
  }
  const Vec3 im(qx, qy, qz);
  const double sin_half = im.norm();
  if (sin_half < 1e-300) return RotationVec();
  const double theta = 2.0 * std::atan2(sin_half, qw);
  return RotationVec(im * (theta / sin_half));
}

double rotation_angle_between(const Mat3& a, const Mat3& b) {
  const Mat3 rel = a.transpose() * b;
  // atan2 form stays accurate near 0 and pi, unlike acos of the trace.
  const Vec3 vee(rel(2, 1) - rel(1, 2), rel(0, 2) - rel(2, 0), rel(1, 0) - rel(0, 1));
  return std::atan2(0.5 * vee.norm(), 0.5 * (rel.trace() - 1.0));
}

RigidTransform RigidTransform::from_matrix(const Mat3& rotation, const Vec3& translation) {
  return {matrix_to_rotation(rotation), translation};
}

Vec3 transform_apply(const RigidTransform& t, const Vec3& p) {
  return t.rotation_matrix() * p + t.translation;
}

RigidTransform transform_invert(const RigidTransform& t) {
  const Mat3 r = t.rotation_matrix();
  return {-t.rotation, -(r.transpose() * t.translation)};
}

RigidTransform transform_compose(const RigidTransform& a, const RigidTransform& b) {
  const Mat3 ra = a.rotation_matrix();
  const Mat3 rb = b.rotation_matrix();
  return {matrix_to_rotation(ra * rb), ra * b.translation + a.translation};
}

void CameraIntrinsics::validate() const {
  if (!(fx > 0.0) || !(fy > 0.0)) throw std::invalid_argument("focal lengths must be positive");
  if (!std::isfinite(cx) || !std::isfinite(cy)) throw std::invalid_argument("principal point must be finite");
  if (width <= 0 || height <= 0) throw std::invalid_argument("image size must be positive");
}

Pixel project(const CameraIntrinsics& k, const Vec3& p_cam) {
  if (!(p_cam.z() > 0.0)) throw BehindCamera("point is not in front of the camera");
  return {k.fx * p_cam.x() / p_cam.z() + k.cx, k.fy * p_cam.y() / p_cam.z() + k.cy};
}

Vec3 back_project(const CameraIntrinsics& k, const Pixel& px, double depth) {
  return {(px.u - k.cx) / k.fx * depth, (px.v - k.cy) / k.fy * depth, depth};
}

}  // namespace gazecone
