#include "gazecone/awareness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "gazecone/errors.hpp"

namespace gazecone {

void AttentionCone::validate() const {
  if (!(half_angle > 0.0) || !(half_angle < std::numbers::pi / 2)) {
    throw std::invalid_argument("cone half angle must lie in (0, pi/2)");
  }
}

double half_angle_from_fov(double full_fov_deg) {
  if (!(full_fov_deg > 0.0) || !(full_fov_deg < 180.0)) {
    throw ConfigError("theta_fov must lie in (0, 180) degrees");
  }
  return 0.5 * full_fov_deg * std::numbers::pi / 180.0;
}

Mat3 optical_to_robot_rotation(double pitch_rad) {
  Mat3 optical;
  // Columns: camera x (right) -> robot -y, camera y (down) -> robot -z,
  // camera z (forward) -> robot +x.
  optical << 0.0, 0.0, 1.0,
            -1.0, 0.0, 0.0,
             0.0, -1.0, 0.0;
  // Positive rotation about the robot's left axis tips the view downward.
  return Eigen::AngleAxisd(pitch_rad, Vec3::UnitY()).toRotationMatrix() * optical;
}

AmrGeometry AmrGeometry::from_mount(const Vec3& camera_position, double pitch_rad) {
  return {RigidTransform::from_matrix(optical_to_robot_rotation(pitch_rad), camera_position)};
}

Vec3 AmrGeometry::reference_in_camera() const {
  return transform_invert(camera_to_reference).translation;
}

double axial_distance(const AttentionCone& cone, const Vec3& p_a) {
  return (p_a - cone.apex).dot(cone.axis.vec());
}

double radial_offset(const AttentionCone& cone, const Vec3& p_a) {
  const Vec3 rel = p_a - cone.apex;
  return (rel - rel.dot(cone.axis.vec()) * cone.axis.vec()).norm();
}

double cone_radius(const AttentionCone& cone, double d) {
  if (!(d > 0.0)) throw NotInFront("cone radius needs positive axial depth");
  return d * std::tan(cone.half_angle);
}

double awareness_score(const AttentionCone& cone, const Vec3& p_a) {
  const double d = axial_distance(cone, p_a);
  if (!(d > 0.0)) return 0.0;
  const double r = cone_radius(cone, d);
  const double d_perp = radial_offset(cone, p_a);
  if (!(d_perp < r)) return 0.0;
  return std::clamp(1.0 - d_perp / r, 0.0, 1.0);
}

Vec3 amr_in_head_frame(const RigidTransform& head_pose, const AmrGeometry& amr) {
  return head_pose.rotation_matrix().transpose() * (amr.reference_in_camera() - head_pose.translation);
}

RobotFramePosition human_position_robot_frame(const RigidTransform& head_pose, const AmrGeometry& amr) {
  const Vec3 p = transform_apply(amr.camera_to_reference, head_pose.translation);
  return {p.x(), p.y()};
}

std::vector<AwarenessSample> evaluate_frame(const std::vector<HeadEstimate>& persons,
                                            const AmrGeometry& amr, double half_angle, double t,
                                            long frame_index) {
  constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
  std::vector<AwarenessSample> out;
  out.reserve(persons.size());
  for (const auto& person : persons) {
    AwarenessSample s;
    s.t = t;
    s.frame_index = frame_index;
    s.person_id = person.person_id;
    if (!person.head_pose) {
      s.d_axial = s.d_perp = s.d_fwd = s.d_lat = kNaN;
      out.push_back(s);
      continue;
    }
    s.head_pose = *person.head_pose;
    s.has_pose = true;
    s.converged = person.converged;

    AttentionCone cone{person.apex_head, UnitVec3::from_unit(Vec3::UnitY()), half_angle};
    const Vec3 p_a = amr_in_head_frame(s.head_pose, amr);
    s.d_axial = axial_distance(cone, p_a);
    s.d_perp = radial_offset(cone, p_a);
    const auto pos = human_position_robot_frame(s.head_pose, amr);
    s.d_fwd = pos.d_fwd;
    s.d_lat = pos.d_lat;
    s.alpha = s.converged ? awareness_score(cone, p_a) : 0.0;
    out.push_back(s);
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const AwarenessSample& a, const AwarenessSample& b) { return a.person_id < b.person_id; });
  return out;
}

}  // namespace gazecone
