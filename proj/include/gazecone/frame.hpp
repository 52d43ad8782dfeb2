#pragma once

// In-memory form of one line of the frame wire format: the per-person
// detector output for a single video frame.

#include <optional>
#include <vector>

#include "gazecone/geometry.hpp"
#include "gazecone/skeleton.hpp"

namespace gazecone {

struct PersonDetection {
  int person_id = 0;
  double confidence = 0.0;
  KeypointMap<Keypoint2D> keypoints_2d;
  KeypointMap<Vec3> keypoints_3d;  // canonical, unitless

  Skeleton2D skeleton_2d() const { return {keypoints_2d, confidence}; }
  CanonicalSkeleton3D skeleton_3d() const {
    CanonicalSkeleton3D s;
    s.keypoints = keypoints_3d;
    return s;
  }
  bool operator==(const PersonDetection&) const = default;
};

// Per-frame replacement for the configured camera mount.
struct AmrMountOverride {
  Vec3 camera_position = Vec3::Zero();  // robot axes, meters from the reference point
  double camera_pitch_deg = 0.0;
  bool operator==(const AmrMountOverride&) const = default;
};

struct FrameMessage {
  double t = 0.0;
  long frame_index = 0;
  std::vector<PersonDetection> persons;
  std::optional<AmrMountOverride> amr;
  bool operator==(const FrameMessage&) const = default;
};

}  // namespace gazecone
