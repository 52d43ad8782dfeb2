#include "gazecone/simulator.hpp"

#include <cmath>
#include <numbers>

#include "gazecone/awareness.hpp"
#include "gazecone/errors.hpp"
#include "gazecone/rng.hpp"
#include "gazecone/text.hpp"

namespace gazecone {

namespace {

using B = ReferenceBody;

Mat3 rot_z(double a) { return Eigen::AngleAxisd(a, Vec3::UnitZ()).toRotationMatrix(); }

// Body frame -> world frame for a planar pose: body +y maps to the heading.
RigidTransform body_to_world(const PlanarPose& pose) {
  return RigidTransform::from_matrix(rot_z(pose.heading - std::numbers::pi / 2), pose.position);
}

RigidTransform amr_to_world(const PlanarPose& pose) {
  return RigidTransform::from_matrix(rot_z(pose.heading), pose.position);
}

// Streams of the keyed generator.
enum Stream : std::uint64_t { kPixelU = 1, kPixelV, kCanonX, kCanonY, kCanonZ, kDropout };

}  // namespace

Skeleton3D ReferenceBody::body_frame(double yaw) {
  Skeleton3D s;
  auto& k = s.keypoints;
  const Vec3 neck(0.0, 0.0, neck_height);
  const double hs = 0.5 * shoulder_span;
  k.set(KeypointId::neck, neck);
  k.set(KeypointId::left_shoulder, neck + Vec3(-hs, 0.0, 0.0));
  k.set(KeypointId::right_shoulder, neck + Vec3(hs, 0.0, 0.0));
  k.set(KeypointId::left_elbow, Vec3(-0.24, 0.0, 1.15));
  k.set(KeypointId::right_elbow, Vec3(0.24, 0.0, 1.15));
  k.set(KeypointId::left_wrist, Vec3(-0.25, 0.02, 0.89));
  k.set(KeypointId::right_wrist, Vec3(0.25, 0.02, 0.89));
  k.set(KeypointId::left_hip, Vec3(-0.15, 0.0, 0.95));
  k.set(KeypointId::right_hip, Vec3(0.15, 0.0, 0.95));
  k.set(KeypointId::left_knee, Vec3(-0.15, 0.02, 0.50));
  k.set(KeypointId::right_knee, Vec3(0.15, 0.02, 0.50));
  k.set(KeypointId::left_ankle, Vec3(-0.15, 0.0, 0.08));
  k.set(KeypointId::right_ankle, Vec3(0.15, 0.0, 0.08));

  // Head points relative to the neck before turning; the nose sits directly
  // above the neck so the turn axis passes through it.
  const Mat3 turn = rot_z(yaw);
  const auto head = [&](KeypointId id, const Vec3& rel) { k.set(id, neck + turn * rel); };
  const double up = head_above_neck;
  head(KeypointId::nose, Vec3(0.0, 0.0, up));
  head(KeypointId::left_eye, Vec3(-0.5 * eye_span, -eye_setback, up + eye_rise));
  head(KeypointId::right_eye, Vec3(0.5 * eye_span, -eye_setback, up + eye_rise));
  head(KeypointId::left_ear, Vec3(-0.5 * ear_span, -ear_setback, up + ear_rise));
  head(KeypointId::right_ear, Vec3(0.5 * ear_span, -ear_setback, up + ear_rise));
  return s;
}

Skeleton3D skeleton_at(const PlanarPose& pose, double head_yaw) {
  const Skeleton3D body = ReferenceBody::body_frame(head_yaw);
  const RigidTransform to_world = body_to_world(pose);
  Skeleton3D world;
  for (std::size_t i = 0; i < kKeypointCount; ++i) {
    const auto id = static_cast<KeypointId>(i);
    if (body.keypoints.has(id)) world.keypoints.set(id, transform_apply(to_world, body.keypoints.at(id)));
  }
  return world;
}

namespace {

struct FrameGeometry {
  RigidTransform world_to_camera;
  RigidTransform world_to_amr;
  Vec3 amr_reference_world;
};

FrameGeometry frame_geometry(const Scenario& s, double t) {
  const RigidTransform amr_world = amr_to_world(s.amr_track.at(t));
  const RigidTransform camera_world = transform_compose(amr_world, transform_invert(s.amr_to_camera()));
  return {transform_invert(camera_world), transform_invert(amr_world), transform_apply(amr_world, s.amr_reference)};
}

Skeleton3D to_frame(const Skeleton3D& s, const RigidTransform& t) {
  Skeleton3D out;
  for (std::size_t i = 0; i < kKeypointCount; ++i) {
    const auto id = static_cast<KeypointId>(i);
    if (s.keypoints.has(id)) out.keypoints.set(id, transform_apply(t, s.keypoints.at(id)));
  }
  return out;
}

}  // namespace

FrameMessage observe(const Scenario& scenario, long frame_index) {
  const double t = scenario.time_of(frame_index);
  const FrameGeometry geo = frame_geometry(scenario, t);
  const SplitMixStream rng(scenario.seed);
  const auto& k = scenario.intrinsics;
  const auto& noise = scenario.noise;
  const auto frame_key = static_cast<std::uint64_t>(frame_index);

  FrameMessage msg;
  msg.t = t;
  msg.frame_index = frame_index;
  for (const auto& human : scenario.humans) {
    const Skeleton3D world = skeleton_at(human.track.at(t), human.head_yaw.at(t));
    const Skeleton3D cam = to_frame(world, geo.world_to_camera);
    const Vec3& nose = cam.keypoints.at(KeypointId::nose);
    if (!(nose.z() > 0.0) || !k.contains(project(k, nose))) continue;

    const double span =
        (cam.keypoints.at(KeypointId::left_shoulder) - cam.keypoints.at(KeypointId::right_shoulder)).norm();
    const auto person_key = static_cast<std::uint64_t>(human.person_id);
    PersonDetection det;
    det.person_id = human.person_id;
    det.confidence = human.confidence;
    for (std::size_t i = 0; i < kBodyKeypointCount; ++i) {
      const auto id = static_cast<KeypointId>(i);
      const Vec3& p = cam.keypoints.at(id);
      if (!(p.z() > 0.0)) continue;
      if (rng.uniform({frame_key, person_key, i, kDropout}) < noise.dropout_prob) continue;
      Pixel px = project(k, p);
      if (!k.contains(px)) continue;
      if (noise.pixel_sigma > 0.0) {
        px.u += noise.pixel_sigma * rng.normal(frame_key, person_key, i, kPixelU);
        px.v += noise.pixel_sigma * rng.normal(frame_key, person_key, i, kPixelV);
      }
      Vec3 canon = p / span;
      if (noise.canonical_sigma > 0.0) {
        canon += noise.canonical_sigma * Vec3(rng.normal(frame_key, person_key, i, kCanonX),
                                              rng.normal(frame_key, person_key, i, kCanonY),
                                              rng.normal(frame_key, person_key, i, kCanonZ));
      }
      det.keypoints_2d.set(id, {px, kSimulatedKeypointScore});
      det.keypoints_3d.set(id, canon);
    }
    msg.persons.push_back(std::move(det));
  }
  return msg;
}

std::vector<GroundTruthRecord> ground_truth(const Scenario& scenario, long frame_index) {
  const double t = scenario.time_of(frame_index);
  const FrameGeometry geo = frame_geometry(scenario, t);
  const double half_angle = half_angle_from_fov(scenario.theta_fov_deg);
  std::string probe;
  for (const auto& p : scenario.probes) {
    if (scenario.frame_at(p.t) == frame_index) probe = p.name;
  }

  std::vector<GroundTruthRecord> out;
  for (const auto& human : scenario.humans) {
    GroundTruthRecord rec;
    rec.t = t;
    rec.frame_index = frame_index;
    rec.person_id = human.person_id;
    rec.head_yaw = human.head_yaw.at(t);
    rec.probe = probe;

    const Skeleton3D world = skeleton_at(human.track.at(t), rec.head_yaw);
    const HeadFrame head = head_frame(world);
    rec.head_pose_world = RigidTransform::from_matrix(head.basis(), head.origin);
    rec.head_pose_camera = transform_compose(geo.world_to_camera, rec.head_pose_world);

    const AttentionCone cone{face_center(world), head.y_hat, half_angle};
    rec.d_axial = axial_distance(cone, geo.amr_reference_world);
    rec.d_perp = radial_offset(cone, geo.amr_reference_world);
    rec.alpha = awareness_score(cone, geo.amr_reference_world);

    const Vec3 nose_amr = transform_apply(geo.world_to_amr, head.origin) - scenario.amr_reference;
    rec.d_fwd = nose_amr.x();
    rec.d_lat = nose_amr.y();

    rec.true_camera_skeleton = to_frame(world, geo.world_to_camera);
    for (std::size_t i = 0; i < kKeypointCount; ++i) {
      const auto id = static_cast<KeypointId>(i);
      const Vec3& p = rec.true_camera_skeleton.keypoints.at(id);
      if (p.z() > 0.0) rec.true_pixels.set(id, project(scenario.intrinsics, p));
    }
    const Vec3& nose = rec.true_camera_skeleton.keypoints.at(KeypointId::nose);
    rec.visible = nose.z() > 0.0 && scenario.intrinsics.contains(project(scenario.intrinsics, nose));
    out.push_back(std::move(rec));
  }
  return out;
}

void run_scenario(const Scenario& scenario, const std::function<void(const SimulatedFrame&)>& visit) {
  scenario.validate();
  const long n = scenario.frame_count();
  for (long f = 0; f < n; ++f) {
    SimulatedFrame frame{observe(scenario, f), ground_truth(scenario, f)};
    visit(frame);
  }
}

std::string ground_truth_csv_header() {
  return "t,frame_index,person_id,alpha,d_axial,d_perp,d_fwd,d_lat,visible,head_yaw_deg,probe,rx,ry,rz,tx,ty,tz";
}

std::string ground_truth_csv_row(const GroundTruthRecord& r) {
  std::string row;
  const auto num = [&row](double v) {
    append_double(row, v);
    row += ',';
  };
  num(r.t);
  row += std::to_string(r.frame_index) + ',' + std::to_string(r.person_id) + ',';
  num(r.alpha);
  num(r.d_axial);
  num(r.d_perp);
  num(r.d_fwd);
  num(r.d_lat);
  row += r.visible ? "1," : "0,";
  num(r.head_yaw * 180.0 / std::numbers::pi);
  row += r.probe + ',';
  const auto& rv = r.head_pose_camera.rotation.axis_angle;
  const auto& tv = r.head_pose_camera.translation;
  for (double v : {rv.x(), rv.y(), rv.z(), tv.x(), tv.y()}) num(v);
  append_double(row, tv.z());
  return row;
}

PipelineConfig pipeline_config_for(const Scenario& scenario) {
  PipelineConfig c;
  c.intrinsics = scenario.intrinsics;
  c.theta_fov_full_deg = scenario.theta_fov_deg;
  c.camera_position = scenario.camera_mount.position - scenario.amr_reference;
  c.camera_pitch_deg = scenario.camera_mount.pitch * 180.0 / std::numbers::pi;
  return c;
}

}  // namespace gazecone
