#pragma once

// Analytic stand-in for a rendered simulation: a parametric reference body
// walks a scripted path, the robot camera observes it through the pinhole
// model, and exact world geometry supplies ground-truth awareness.

#include <functional>
#include <string>
#include <vector>

#include "gazecone/config.hpp"
#include "gazecone/frame.hpp"
#include "gazecone/scenario.hpp"
#include "gazecone/skeleton.hpp"

namespace gazecone {

// Reference body dimensions shared by every scenario, meters.
struct ReferenceBody {
  static constexpr double shoulder_span = 0.45;
  static constexpr double ear_span = 0.16;
  static constexpr double head_above_neck = 0.18;  // nose above neck
  static constexpr double eye_rise = 0.03;         // eyes above the nose plane
  static constexpr double eye_span = 0.064;
  static constexpr double eye_setback = 0.02;      // eyes behind the nose tip
  static constexpr double ear_setback = 0.10;      // ears behind the nose tip
  static constexpr double ear_rise = 0.02;
  static constexpr double neck_height = 1.45;      // above the ground

  // Keypoints in the body frame (x right, y forward, z up, origin on the
  // ground below the neck) with the head turned by `yaw` about the neck's
  // vertical axis.
  static Skeleton3D body_frame(double yaw);
};

// World-frame reference body for a planar pose and head yaw.
Skeleton3D skeleton_at(const PlanarPose& pose, double head_yaw);

struct GroundTruthRecord {
  double t = 0.0;
  long frame_index = 0;
  int person_id = 0;
  double head_yaw = 0.0;             // relative to body heading, radians
  RigidTransform head_pose_world;    // head -> world
  RigidTransform head_pose_camera;   // head -> camera
  double alpha = 0.0;
  double d_axial = 0.0;
  double d_perp = 0.0;
  double d_fwd = 0.0;
  double d_lat = 0.0;
  bool visible = false;              // detected by the robot camera
  std::string probe;                 // probe name when this frame is one
  KeypointMap<Pixel> true_pixels;    // noise-free, only where z > 0
  Skeleton3D true_camera_skeleton;   // meters, camera frame
};

// Noisy detector output for one frame. Deterministic in (seed, frame_index).
FrameMessage observe(const Scenario& scenario, long frame_index);

// One record per human.
std::vector<GroundTruthRecord> ground_truth(const Scenario& scenario, long frame_index);

struct SimulatedFrame {
  FrameMessage observation;
  std::vector<GroundTruthRecord> truth;
};

// Visits all round(duration * fps) frames in time order.
void run_scenario(const Scenario& scenario, const std::function<void(const SimulatedFrame&)>& visit);

// Detector confidence assigned to every visible keypoint.
inline constexpr double kSimulatedKeypointScore = 0.95;

// Ground-truth CSV. Pose columns are head -> camera.
std::string ground_truth_csv_header();
std::string ground_truth_csv_row(const GroundTruthRecord& r);

// Pipeline defaults with the scenario's camera, mount, and cone angle.
PipelineConfig pipeline_config_for(const Scenario& scenario);

}  // namespace gazecone
