#pragma once

// Seeded generators and independent reference computations for tests.

#include <cmath>
#include <numbers>
#include <random>

#include <Eigen/Geometry>

#include "gazecone/geometry.hpp"
#include "gazecone/skeleton.hpp"

namespace gazecone::testing {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kDeg = kPi / 180.0;

class Sampler {
 public:
  explicit Sampler(std::uint64_t seed) : gen_(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(gen_); }
  double normal(double sigma) { return std::normal_distribution<double>(0.0, sigma)(gen_); }
  Vec3 vec(double lo, double hi) { return {uniform(lo, hi), uniform(lo, hi), uniform(lo, hi)}; }

  Vec3 unit() {
    Vec3 v;
    do {
      v = vec(-1.0, 1.0);
    } while (v.norm() < 1e-3 || v.norm() > 1.0);
    return v.normalized();
  }

  // Angle uniform in [0, max_angle], axis uniform on the sphere.
  RotationVec rotation(double max_angle = kPi) { return RotationVec(unit() * uniform(0.0, max_angle)); }

  RigidTransform transform(double max_translation = 5.0) {
    return {rotation(), vec(-max_translation, max_translation)};
  }

  std::mt19937_64& engine() { return gen_; }

 private:
  std::mt19937_64 gen_;
};

// Rotation matrix through Eigen's own angle-axis code, used as an oracle.
inline Mat3 eigen_rotation(const RotationVec& r) {
  const double a = r.angle();
  if (a == 0.0) return Mat3::Identity();
  return Eigen::AngleAxisd(a, r.axis_angle / a).toRotationMatrix();
}

// A generic metric skeleton: nose at the origin, facing +y, z up.
inline MetricSkeleton3D frontal_head() {
  MetricSkeleton3D s;
  s.keypoints.set(KeypointId::nose, Vec3(0.0, 0.0, 0.0));
  s.keypoints.set(KeypointId::left_eye, Vec3(-0.032, -0.02, 0.03));
  s.keypoints.set(KeypointId::right_eye, Vec3(0.032, -0.02, 0.03));
  s.keypoints.set(KeypointId::left_ear, Vec3(-0.08, -0.10, 0.02));
  s.keypoints.set(KeypointId::right_ear, Vec3(0.08, -0.10, 0.02));
  s.keypoints.set(KeypointId::left_shoulder, Vec3(-0.225, -0.10, -0.18));
  s.keypoints.set(KeypointId::right_shoulder, Vec3(0.225, -0.10, -0.18));
  s.keypoints.set(KeypointId::neck, Vec3(0.0, -0.10, -0.18));
  return s;
}

template <typename S>
S transformed(S s, const RigidTransform& t) {
  for (std::size_t i = 0; i < kKeypointCount; ++i) {
    const auto id = static_cast<KeypointId>(i);
    if (s.keypoints.has(id)) s.keypoints.set(id, transform_apply(t, s.keypoints.at(id)));
  }
  return s;
}

}  // namespace gazecone::testing
