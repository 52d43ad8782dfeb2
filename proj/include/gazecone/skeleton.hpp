#pragma once

// Keypoint schema and the geometric head model built from a 3D skeleton.

#include <array>
#include <cstddef>
#include <cstdint>
#include <istream>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "gazecone/geometry.hpp"

namespace gazecone {

// 17-point body schema followed by the derived neck joint. The numeric values
// are the array indices of the wire format.
enum class KeypointId : std::uint8_t {
  nose = 0,
  left_eye,
  right_eye,
  left_ear,
  right_ear,
  left_shoulder,
  right_shoulder,
  left_elbow,
  right_elbow,
  left_wrist,
  right_wrist,
  left_hip,
  right_hip,
  left_knee,
  right_knee,
  left_ankle,
  right_ankle,
  neck,
};

inline constexpr std::size_t kKeypointCount = 18;
inline constexpr std::size_t kBodyKeypointCount = 17;

constexpr std::size_t index_of(KeypointId id) { return static_cast<std::size_t>(id); }
std::string_view keypoint_name(KeypointId id);
std::optional<KeypointId> keypoint_from_name(std::string_view name);

inline constexpr std::array<KeypointId, 5> kFaceKeypoints = {
    KeypointId::nose, KeypointId::left_eye, KeypointId::right_eye, KeypointId::left_ear,
    KeypointId::right_ear};

// Fixed-size map from KeypointId to an optional value.
template <typename T>
class KeypointMap {
 public:
  bool has(KeypointId id) const { return slots_[index_of(id)].has_value(); }
  const T& at(KeypointId id) const { return *slots_[index_of(id)]; }
  T& at(KeypointId id) { return *slots_[index_of(id)]; }
  const std::optional<T>& get(KeypointId id) const { return slots_[index_of(id)]; }
  void set(KeypointId id, const T& value) { slots_[index_of(id)] = value; }
  void erase(KeypointId id) { slots_[index_of(id)].reset(); }

  std::size_t count() const {
    std::size_t n = 0;
    for (const auto& s : slots_) n += s.has_value() ? 1 : 0;
    return n;
  }
  bool empty() const { return count() == 0; }

  bool operator==(const KeypointMap&) const = default;

 private:
  std::array<std::optional<T>, kKeypointCount> slots_{};
};

struct Keypoint2D {
  Pixel pixel;
  double confidence = 1.0;

  bool operator==(const Keypoint2D& o) const {
    return pixel.u == o.pixel.u && pixel.v == o.pixel.v && confidence == o.confidence;
  }
};

struct Skeleton2D {
  KeypointMap<Keypoint2D> keypoints;
  double person_confidence = 1.0;
};

struct Skeleton3D {
  KeypointMap<Vec3> keypoints;
  // True when the neck entry was synthesized rather than measured.
  bool neck_derived = false;
};

// Unitless 3D keypoints from a pose-lifting model, camera axes.
struct CanonicalSkeleton3D : Skeleton3D {};

// Metric keypoints in meters with the nose at the origin.
struct MetricSkeleton3D : Skeleton3D {};

// Average adult body dimensions, meters. Only shoulder_span drives the metric
// scale; the remaining entries feed initialization and diagnostics.
struct AnthropometricTable {
  double shoulder_span = 0.45;
  double ear_span = 0.16;
  double nose_to_neck = 0.18;
  double upper_arm = 0.30;
  double forearm = 0.26;
  double hip_span = 0.30;
  double torso = 0.50;
  double thigh = 0.45;
  double shin = 0.42;

  void validate() const;
  // Parses `key = value` lines (meters, '#' comments). Keys may carry an
  // optional "anthropometric." prefix. Unknown keys throw ConfigError.
  static AnthropometricTable parse(std::istream& in);
  // Applies one key; returns false when the key is not a table entry.
  bool set(std::string_view key, double value);
};

// Right-handed head frame: y_hat is forward (gaze), z_hat points from the
// left ear toward the right ear, x_hat = y_hat x z_hat.
struct HeadFrame {
  UnitVec3 x_hat;
  UnitVec3 y_hat;
  UnitVec3 z_hat;
  Vec3 origin = Vec3::Zero();

  // Columns are the head axes expressed in the parent frame.
  Mat3 basis() const;
  // Head-frame coordinates of a parent-frame point.
  Vec3 to_head(const Vec3& p) const { return basis().transpose() * (p - origin); }
};

// Single global scale anchored on shoulder span, then nose-centering.
// Throws DegenerateSkeleton when a shoulder or the nose is missing, or the
// shoulders coincide.
MetricSkeleton3D rescale_to_metric(const CanonicalSkeleton3D& c,
                                   const AnthropometricTable& table = {});

// Adds neck = shoulder midpoint (flagged derived) unless a neck is present.
template <typename SkeletonT>
SkeletonT synthesize_neck(SkeletonT s);

// 2D counterpart: pixel midpoint of the shoulders, confidence of the weaker one.
Skeleton2D synthesize_neck(Skeleton2D s);

// ĝ0 = unit(left_ear - right_ear) x unit(nose - neck), sign-corrected so it
// exits through the face. Throws DegenerateHead.
UnitVec3 initial_gaze(const Skeleton3D& s);

// Throws DegenerateHead when initial_gaze does.
HeadFrame head_frame(const Skeleton3D& s);

// Centroid of the present face keypoints (nose, eyes, ears); needs at least 3.
Vec3 face_center(const Skeleton3D& s);

// Drops keypoints whose 2D confidence is below `threshold`; the matching 3D
// entries are dropped too so both views agree on what is missing.
void gate_by_confidence(Skeleton2D& s2d, Skeleton3D& s3d, double threshold);

}  // namespace gazecone
