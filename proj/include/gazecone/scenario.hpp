#pragma once

// Scripted encounter between one robot and one or more walking humans.
//
// Scenario files are JSON with a versioned header:
//   {"format": "gazecone-scenario", "version": 1, ...}
// See data/scenarios/README.md for the full schema.

#include <cstdint>
#include <istream>
#include <string>
#include <string_view>
#include <vector>

#include "gazecone/awareness.hpp"
#include "gazecone/geometry.hpp"

namespace gazecone {

inline constexpr std::string_view kScenarioFormat = "gazecone-scenario";
inline constexpr int kScenarioVersion = 1;

struct Waypoint {
  double t = 0.0;              // seconds
  Vec3 position = Vec3::Zero();  // world meters, z up
  double heading = 0.0;        // radians, CCW from world +x
};

struct PlanarPose {
  Vec3 position = Vec3::Zero();
  double heading = 0.0;
};

// Piecewise-linear in position and in the raw heading value (no wrapping, so
// a file can script a turn through any angle).
struct TrajectorySpec {
  std::vector<Waypoint> waypoints;

  PlanarPose at(double t) const;
};

// Head yaw relative to the body heading, radians, positive = turn left.
struct HeadYawProfile {
  enum class Kind { sinusoid, keyframes };
  struct Keyframe {
    double t = 0.0;
    double yaw = 0.0;
  };

  Kind kind = Kind::keyframes;
  double amplitude = 0.0;
  double period = 1.0;
  double phase = 0.0;
  std::vector<Keyframe> keyframes;

  double at(double t) const;
};

struct NoiseSpec {
  double pixel_sigma = 0.0;      // pixels
  double canonical_sigma = 0.0;  // canonical units (shoulder spans)
  double dropout_prob = 0.0;     // per keypoint, in [0, 1]
};

struct HumanSpec {
  int person_id = 0;
  double confidence = 0.9;
  TrajectorySpec track;
  HeadYawProfile head_yaw;
};

struct CameraMount {
  Vec3 position = Vec3(0.25, 0.0, 1.45);  // robot frame, meters
  double pitch = 0.0;                     // radians, positive tilts down
};

// A labeled time of interest; targets are optional regression values.
struct Probe {
  std::string name;
  double t = 0.0;
  double target_alpha = -1.0;  // negative = unset
  double target_d_fwd = 0.0;
  double target_d_lat = 0.0;
  bool has_targets = false;
};

struct Scenario {
  std::string name;
  double duration = 0.0;
  double fps = 0.0;
  std::uint64_t seed = 0;
  CameraIntrinsics intrinsics;
  CameraMount camera_mount;
  // AMR reference point in the robot frame (the point the human must see).
  Vec3 amr_reference = Vec3(0.25, 0.0, 1.45);
  double theta_fov_deg = kDefaultFullFovDeg;  // full angle
  NoiseSpec noise;
  TrajectorySpec amr_track;
  std::vector<HumanSpec> humans;
  std::vector<Probe> probes;

  long frame_count() const;
  double time_of(long frame_index) const;
  // Frame whose timestamp is nearest to t.
  long frame_at(double t) const;

  // Camera -> robot reference frame, for the estimator.
  AmrGeometry estimator_geometry() const;
  // AMR-frame point to camera-frame point.
  RigidTransform amr_to_camera() const;

  // Throws SchemaError on any violated invariant.
  void validate() const;
};

// Throws SchemaError (malformed) or VersionError (wrong header).
Scenario parse_scenario(std::string_view json_text);
Scenario load_scenario(const std::string& path);
std::string serialize_scenario(const Scenario& s);

// Scenarios compiled into the binary ("fig2").
std::vector<std::string> builtin_scenario_names();
// Resolves a built-in name or a file path.
Scenario resolve_scenario(const std::string& name_or_path);

}  // namespace gazecone
