#include "gazecone/skeleton.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include "gazecone/errors.hpp"

namespace gazecone {

namespace {

constexpr std::array<std::string_view, kKeypointCount> kNames = {
    "nose",          "left_eye",       "right_eye",  "left_ear",    "right_ear",
    "left_shoulder", "right_shoulder", "left_elbow", "right_elbow", "left_wrist",
    "right_wrist",   "left_hip",       "right_hip",  "left_knee",   "right_knee",
    "left_ankle",    "right_ankle",    "neck"};

constexpr double kMinSegment = 1e-12;

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

}  // namespace

std::string_view keypoint_name(KeypointId id) { return kNames[index_of(id)]; }

std::optional<KeypointId> keypoint_from_name(std::string_view name) {
  for (std::size_t i = 0; i < kNames.size(); ++i) {
    if (kNames[i] == name) return static_cast<KeypointId>(i);
  }
  return std::nullopt;
}

void AnthropometricTable::validate() const {
  for (double v : {shoulder_span, ear_span, nose_to_neck, upper_arm, forearm, hip_span, torso,
                   thigh, shin}) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw ConfigError("anthropometric lengths must be positive");
    }
  }
}

bool AnthropometricTable::set(std::string_view key, double value) {
  if (key.starts_with("anthropometric.")) key.remove_prefix(15);
  struct Entry {
    std::string_view name;
    double AnthropometricTable::*field;
  };
  static constexpr Entry kEntries[] = {
      {"shoulder_span", &AnthropometricTable::shoulder_span},
      {"ear_span", &AnthropometricTable::ear_span},
      {"nose_to_neck", &AnthropometricTable::nose_to_neck},
      {"upper_arm", &AnthropometricTable::upper_arm},
      {"forearm", &AnthropometricTable::forearm},
      {"hip_span", &AnthropometricTable::hip_span},
      {"torso", &AnthropometricTable::torso},
      {"thigh", &AnthropometricTable::thigh},
      {"shin", &AnthropometricTable::shin},
  };
  for (const auto& e : kEntries) {
    if (e.name == key) {
      this->*e.field = value;
      return true;
    }
  }
  return false;
}

AnthropometricTable AnthropometricTable::parse(std::istream& in) {
  AnthropometricTable table;
  std::string line;
  long number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const std::string body = trim(line);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(number) + ": expected key = value");
    }
    const std::string key = trim(std::string_view(body).substr(0, eq));
    const std::string value = trim(std::string_view(body).substr(eq + 1));
    double parsed = 0.0;
    std::istringstream vs(value);
    if (!(vs >> parsed) || !(vs >> std::ws).eof()) {
      throw ConfigError("line " + std::to_string(number) + ": bad number for " + key);
    }
    if (!table.set(key, parsed)) {
      throw ConfigError("line " + std::to_string(number) + ": unknown key " + key);
    }
  }
  table.validate();
  return table;
}

Mat3 HeadFrame::basis() const {
  Mat3 b;
  b.col(0) = x_hat.vec();
  b.col(1) = y_hat.vec();
  b.col(2) = z_hat.vec();
  return b;
}

MetricSkeleton3D rescale_to_metric(const CanonicalSkeleton3D& c, const AnthropometricTable& table) {
  const auto& kp = c.keypoints;
  if (!kp.has(KeypointId::left_shoulder) || !kp.has(KeypointId::right_shoulder)) {
    throw DegenerateSkeleton("shoulder pair missing");
  }
  if (!kp.has(KeypointId::nose)) throw DegenerateSkeleton("nose missing");
  const double span = (kp.at(KeypointId::left_shoulder) - kp.at(KeypointId::right_shoulder)).norm();
  if (!(span > kMinSegment) || !std::isfinite(span)) {
    throw DegenerateSkeleton("shoulders coincide");
  }
  const double scale = table.shoulder_span / span;
  const Vec3 nose = scale * kp.at(KeypointId::nose);

  MetricSkeleton3D m;
  m.neck_derived = c.neck_derived;
  for (std::size_t i = 0; i < kKeypointCount; ++i) {
    const auto id = static_cast<KeypointId>(i);
    if (kp.has(id)) m.keypoints.set(id, scale * kp.at(id) - nose);
  }
  m.keypoints.set(KeypointId::nose, Vec3::Zero());
  return m;
}

template <typename SkeletonT>
SkeletonT synthesize_neck(SkeletonT s) {
  if (s.keypoints.has(KeypointId::neck)) return s;
  if (!s.keypoints.has(KeypointId::left_shoulder) || !s.keypoints.has(KeypointId::right_shoulder)) {
    throw DegenerateSkeleton("cannot synthesize neck without both shoulders");
  }
  s.keypoints.set(KeypointId::neck, 0.5 * (s.keypoints.at(KeypointId::left_shoulder) +
                                           s.keypoints.at(KeypointId::right_shoulder)));
  s.neck_derived = true;
  return s;
}

template Skeleton3D synthesize_neck(Skeleton3D);
template CanonicalSkeleton3D synthesize_neck(CanonicalSkeleton3D);
template MetricSkeleton3D synthesize_neck(MetricSkeleton3D);

Skeleton2D synthesize_neck(Skeleton2D s) {
  if (s.keypoints.has(KeypointId::neck)) return s;
  if (!s.keypoints.has(KeypointId::left_shoulder) || !s.keypoints.has(KeypointId::right_shoulder)) {
    throw DegenerateSkeleton("cannot synthesize neck without both shoulders");
  }
  const auto& l = s.keypoints.at(KeypointId::left_shoulder);
  const auto& r = s.keypoints.at(KeypointId::right_shoulder);
  s.keypoints.set(KeypointId::neck,
                  Keypoint2D{{0.5 * (l.pixel.u + r.pixel.u), 0.5 * (l.pixel.v + r.pixel.v)},
                             std::min(l.confidence, r.confidence)});
  return s;
}

UnitVec3 initial_gaze(const Skeleton3D& s) {
  const auto& kp = s.keypoints;
  for (KeypointId id : {KeypointId::left_ear, KeypointId::right_ear, KeypointId::nose, KeypointId::neck}) {
    if (!kp.has(id)) throw DegenerateHead(std::string(keypoint_name(id)) + " missing");
  }
  const Vec3 ear_axis = kp.at(KeypointId::left_ear) - kp.at(KeypointId::right_ear);
  const Vec3 up = kp.at(KeypointId::nose) - kp.at(KeypointId::neck);
  const double ear_len = ear_axis.norm();
  const double up_len = up.norm();
  if (!(ear_len > kMinSegment)) throw DegenerateHead("ears coincide");
  if (!(up_len > kMinSegment)) throw DegenerateHead("nose coincides with neck");

  Vec3 g = (ear_axis / ear_len).cross(up / up_len);
  const double g_len = g.norm();
  if (!(g_len > 1e-9) || !std::isfinite(g_len)) {
    throw DegenerateHead("ear axis parallel to nose-neck axis");
  }
  g /= g_len;

  const Vec3 ear_mid = 0.5 * (kp.at(KeypointId::left_ear) + kp.at(KeypointId::right_ear));
  const double facing = g.dot(kp.at(KeypointId::nose) - ear_mid);
  if (facing < 0.0) g = -g;
  return UnitVec3::from_unit(g);
}

HeadFrame head_frame(const Skeleton3D& s) {
  const UnitVec3 y = initial_gaze(s);
  const auto& kp = s.keypoints;
  const Vec3 ear_axis = kp.at(KeypointId::right_ear) - kp.at(KeypointId::left_ear);
  // Keep y exact and project the ear axis onto its orthogonal complement.
  Vec3 z = ear_axis / ear_axis.norm();
  z -= z.dot(y.vec()) * y.vec();
  const double z_len = z.norm();
  if (!(z_len > 1e-9)) throw DegenerateHead("ear axis parallel to gaze");
  z /= z_len;
  // One more pass removes the residual from the first projection.
  z -= z.dot(y.vec()) * y.vec();
  z.normalize();
  const Vec3 x = y.vec().cross(z);

  HeadFrame f;
  f.y_hat = y;
  f.z_hat = UnitVec3::normalized(z);
  f.x_hat = UnitVec3::normalized(x);
  f.origin = kp.at(KeypointId::nose);
  return f;
}

Vec3 face_center(const Skeleton3D& s) {
  Vec3 sum = Vec3::Zero();
  int n = 0;
  for (KeypointId id : kFaceKeypoints) {
    if (s.keypoints.has(id)) {
      sum += s.keypoints.at(id);
      ++n;
    }
  }
  if (n < 3) throw DegenerateHead("fewer than 3 face keypoints");
  return sum / n;
}

void gate_by_confidence(Skeleton2D& s2d, Skeleton3D& s3d, double threshold) {
  for (std::size_t i = 0; i < kKeypointCount; ++i) {
    const auto id = static_cast<KeypointId>(i);
    const bool keep = s2d.keypoints.has(id) && s2d.keypoints.at(id).confidence >= threshold;
    if (!keep) {
      s2d.keypoints.erase(id);
      // A measured 3D neck has no 2D score in the body schema; keep it.
      if (!(id == KeypointId::neck && s3d.keypoints.has(id) && !s3d.neck_derived)) {
        s3d.keypoints.erase(id);
      }
    }
  }
}

}  // namespace gazecone
