#pragma once

// Angle-based awareness score, written independently of the library's
// distance-based form: zero behind the gaze plane or outside the cone,
// otherwise 1 - tan(angle) / tan(half_angle).

#include <cmath>

#include "gazecone/geometry.hpp"

namespace gazecone::testing {

inline double oracle_awareness(const Vec3& apex, const Vec3& axis_unit, double half_angle, const Vec3& p) {
  const Vec3 rel = p - apex;
  const double along = rel.dot(axis_unit);
  if (!(along > 0.0)) return 0.0;
  const double angle = std::atan2(rel.cross(axis_unit).norm(), along);
  if (angle >= half_angle) return 0.0;
  return 1.0 - std::tan(angle) / std::tan(half_angle);
}

}  // namespace gazecone::testing
