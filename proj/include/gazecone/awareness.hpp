#pragma once

// Attention-cone awareness score.
//
// The cone has its apex at the face center and its axis along the gaze.
// `half_angle` is the angle between the axis and the cone surface, so the
// cone radius at axial depth d is d * tan(half_angle). A full field-of-view
// angle from configuration is halved once, by half_angle_from_fov().

#include <optional>
#include <vector>

#include "gazecone/geometry.hpp"

namespace gazecone {

struct AttentionCone {
  Vec3 apex = Vec3::Zero();
  UnitVec3 axis;
  double half_angle = 0.0;  // radians, in (0, pi/2)

  // Throws std::invalid_argument when half_angle is out of range.
  void validate() const;
};

// Degrees of full field of view -> radians of half angle. Throws ConfigError
// unless the full angle is in (0, 180).
double half_angle_from_fov(double full_fov_deg);

inline constexpr double kDefaultFullFovDeg = 120.0;

// Robot frame convention: x forward along the heading, y to the robot's
// left, z up. The AMR itself is represented by the origin of this frame.
struct AmrGeometry {
  RigidTransform camera_to_reference;

  // Camera mounted at `camera_position` (robot axes, meters from the
  // reference point), pitched down by `pitch_rad`, no roll or yaw.
  static AmrGeometry from_mount(const Vec3& camera_position, double pitch_rad);
  // Reference point expressed in camera coordinates.
  Vec3 reference_in_camera() const;
};

// Camera optical axes (x right, y down, z forward) expressed in robot axes.
Mat3 optical_to_robot_rotation(double pitch_rad);

// d = (p_a - c) . g. Negative behind the gaze plane.
double axial_distance(const AttentionCone& cone, const Vec3& p_a);
// Distance from p_a to the cone axis line.
double radial_offset(const AttentionCone& cone, const Vec3& p_a);
// d tan(half_angle). Throws NotInFront for d <= 0.
double cone_radius(const AttentionCone& cone, double d);
// 1 - d_perp / r(d) inside the cone, 0 otherwise (including the boundary).
double awareness_score(const AttentionCone& cone, const Vec3& p_a);

// AMR reference point in head-frame coordinates: R^T (p_ref_cam - t).
Vec3 amr_in_head_frame(const RigidTransform& head_pose, const AmrGeometry& amr);

struct RobotFramePosition {
  double d_fwd = 0.0;
  double d_lat = 0.0;  // positive: human on the robot's left
};

// Head origin (nose) mapped into the robot reference frame.
RobotFramePosition human_position_robot_frame(const RigidTransform& head_pose, const AmrGeometry& amr);

struct AwarenessSample {
  double t = 0.0;
  long frame_index = 0;
  int person_id = 0;
  double alpha = 0.0;
  double d_axial = 0.0;
  double d_perp = 0.0;
  double d_fwd = 0.0;
  double d_lat = 0.0;
  RigidTransform head_pose;
  bool has_pose = false;
  bool converged = false;
};

// Per-person input to evaluate_frame.
struct HeadEstimate {
  int person_id = 0;
  // Absent when the skeleton was too degenerate to attempt PnP.
  std::optional<RigidTransform> head_pose;
  bool converged = false;
  // Cone apex in head-frame coordinates (face center).
  Vec3 apex_head = Vec3::Zero();
};

// Scores every person. Non-converged or pose-less persons get alpha = 0 and
// converged = false; distances are still reported when a pose exists.
// Output sorted by person_id.
std::vector<AwarenessSample> evaluate_frame(const std::vector<HeadEstimate>& persons,
                                            const AmrGeometry& amr, double half_angle, double t,
                                            long frame_index = 0);

}  // namespace gazecone
