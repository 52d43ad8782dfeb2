#include <doctest.h>

#include "gazecone/errors.hpp"
#include "gazecone/frame_io.hpp"
#include "gazecone/pipeline.hpp"
#include "gazecone/scenario.hpp"
#include "gazecone/simulator.hpp"
#include "test_support.hpp"

using namespace gazecone;
using namespace gazecone::testing;

namespace {

// One static human facing the robot head-on from 3 m, AMR reference at face height.
Scenario facing_scenario() {
  Scenario s;
  s.name = "facing";
  s.duration = 1.0;
  s.fps = 10.0;
  s.seed = 7;
  s.amr_reference = Vec3(0.0, 0.0, 1.65);
  s.camera_mount.position = Vec3(0.0, 0.0, 1.45);
  s.amr_track.waypoints = {{0.0, Vec3::Zero(), 0.0}, {1.0, Vec3::Zero(), 0.0}};
  HumanSpec h;
  h.person_id = 4;
  h.track.waypoints = {{0.0, Vec3(3.0, 0.0, 0.0), kPi}, {1.0, Vec3(3.0, 0.0, 0.0), kPi}};
  h.head_yaw.keyframes = {{0.0, 0.0}};
  s.humans = {h};
  return s;
}

}  // namespace

TEST_CASE("reference body dimensions") {
  const Skeleton3D b = ReferenceBody::body_frame(0.0);
  const double span = (b.keypoints.at(KeypointId::left_shoulder) - b.keypoints.at(KeypointId::right_shoulder)).norm();
  CHECK(std::abs(span - 0.45) < 1e-12);
  const double ears = (b.keypoints.at(KeypointId::left_ear) - b.keypoints.at(KeypointId::right_ear)).norm();
  CHECK(std::abs(ears - 0.16) < 1e-12);
  CHECK(std::abs(b.keypoints.at(KeypointId::nose).z() - b.keypoints.at(KeypointId::neck).z() - 0.18) < 1e-12);
  CHECK(std::abs(b.keypoints.at(KeypointId::left_eye).z() - b.keypoints.at(KeypointId::nose).z() - 0.03) < 1e-12);
  CHECK(b.keypoints.count() == kKeypointCount);
}

TEST_CASE("skeleton_at: heading and yaw set the gaze") {
  const Skeleton3D s = skeleton_at({Vec3(1.0, 2.0, 0.0), kPi / 2}, 0.0);
  CHECK((initial_gaze(s).vec() - Vec3::UnitY()).norm() < 1e-9);
  const Skeleton3D turned = skeleton_at({Vec3(1.0, 2.0, 0.0), kPi / 2}, kPi / 2);
  CHECK((initial_gaze(turned).vec() - Vec3(-1.0, 0.0, 0.0)).norm() < 1e-9);
  const double span =
      (s.keypoints.at(KeypointId::left_shoulder) - s.keypoints.at(KeypointId::right_shoulder)).norm();
  CHECK(std::abs(span - 0.45) < 1e-12);
  Sampler rng(501);
  for (int i = 0; i < 200; ++i) {
    const double heading = rng.uniform(-kPi, kPi), yaw = rng.uniform(-1.5, 1.5);
    const Vec3 g = initial_gaze(skeleton_at({rng.vec(-5, 5), heading}, yaw)).vec();
    CHECK((g - Vec3(std::cos(heading + yaw), std::sin(heading + yaw), 0.0)).norm() < 1e-9);
    // Metric invariants after re-centering on the nose.
    CanonicalSkeleton3D c;
    c.keypoints = skeleton_at({rng.vec(-5, 5), heading}, yaw).keypoints;
    const MetricSkeleton3D m = rescale_to_metric(c);
    CHECK(m.keypoints.at(KeypointId::nose).norm() < 1e-12);
  }
}

TEST_CASE("frame counts") {
  Scenario s = facing_scenario();
  s.duration = 25.0;
  s.fps = 60.0;
  for (auto& w : s.amr_track.waypoints) w.t *= 25.0;
  for (auto& w : s.humans[0].track.waypoints) w.t *= 25.0;
  long n = 0;
  run_scenario(s, [&](const SimulatedFrame& f) {
    CHECK(f.observation.frame_index == n);
    ++n;
  });
  CHECK(n == 1500);

  Scenario one = facing_scenario();
  one.fps = 1.0;
  n = 0;
  run_scenario(one, [&](const SimulatedFrame&) { ++n; });
  CHECK(n == 1);
}

TEST_CASE("ground truth: gazing at the reference gives 1, facing away gives 0") {
  Scenario s = facing_scenario();
  const auto at = ground_truth(s, 0);
  REQUIRE(at.size() == 1);
  CHECK(std::abs(at[0].alpha - 1.0) < 1e-9);
  CHECK(at[0].visible);
  CHECK(std::abs(at[0].d_fwd - 3.0) < 1e-12);
  CHECK(std::abs(at[0].d_lat) < 1e-12);

  s.humans[0].track.waypoints = {{0.0, Vec3(3.0, 0.0, 0.0), 0.0}, {1.0, Vec3(3.0, 0.0, 0.0), 0.0}};
  CHECK(ground_truth(s, 0)[0].alpha == 0.0);
}

TEST_CASE("ground truth obeys awareness invariants on fig2") {
  const Scenario s = resolve_scenario("fig2");
  bool any_positive = false, any_zero = false;
  for (long f = 0; f < s.frame_count(); f += 7) {
    const auto r = ground_truth(s, f)[0];
    CHECK(r.alpha >= 0.0);
    CHECK(r.alpha <= 1.0);
    if (r.d_axial <= 0.0) CHECK(r.alpha == 0.0);
    any_positive = any_positive || r.alpha > 0.0;
    any_zero = any_zero || r.alpha == 0.0;
    CHECK(r.visible);
  }
  CHECK(any_positive);
  CHECK(any_zero);
}

TEST_CASE("fig2 probes reproduce the target geometry") {
  const Scenario s = resolve_scenario("fig2");
  CHECK(s.frame_count() == 1500);
  REQUIRE(s.probes.size() == 3);
  const long frames[] = {339, 600, 975};
  for (std::size_t i = 0; i < 3; ++i) {
    const Probe& p = s.probes[i];
    CHECK(s.frame_at(p.t) == frames[i]);
    const auto r = ground_truth(s, frames[i])[0];
    CHECK(r.probe == p.name);
    CHECK(std::abs(r.alpha - p.target_alpha) < 1e-3);
    CHECK(std::abs(r.d_fwd - p.target_d_fwd) < 1e-6);
    CHECK(std::abs(r.d_lat - p.target_d_lat) < 1e-6);
  }
}

TEST_CASE("observe is deterministic and keyed by frame") {
  Scenario s = resolve_scenario("fig2");
  s.noise = {2.0, 0.01, 0.05};
  CHECK(serialize_frame(observe(s, 123)) == serialize_frame(observe(s, 123)));
  CHECK(serialize_frame(observe(s, 123)) != serialize_frame(observe(s, 124)));
  Scenario other = s;
  other.seed += 1;
  CHECK(serialize_frame(observe(s, 50)) != serialize_frame(observe(other, 50)));
}

TEST_CASE("observe: noise-free output matches the true projections") {
  const Scenario s = resolve_scenario("fig2");
  const FrameMessage m = observe(s, 200);
  const auto truth = ground_truth(s, 200)[0];
  REQUIRE(m.persons.size() == 1);
  const auto& p = m.persons[0];
  CHECK_FALSE(p.keypoints_2d.has(KeypointId::neck));
  for (std::size_t i = 0; i < kBodyKeypointCount; ++i) {
    const auto id = static_cast<KeypointId>(i);
    // Keypoints outside the image (the feet, at this range) are absent.
    const bool inside = s.intrinsics.contains(truth.true_pixels.at(id));
    CHECK(p.keypoints_2d.has(id) == inside);
    CHECK(p.keypoints_3d.has(id) == inside);
    if (!inside) continue;
    CHECK(p.keypoints_2d.at(id).pixel.u == truth.true_pixels.at(id).u);
    CHECK(p.keypoints_2d.at(id).confidence == kSimulatedKeypointScore);
  }
  const double span = (p.keypoints_3d.at(KeypointId::left_shoulder) - p.keypoints_3d.at(KeypointId::right_shoulder)).norm();
  CHECK(std::abs(span - 1.0) < 1e-12);
}

TEST_CASE("observe: dropout 1 empties every skeleton") {
  Scenario s = resolve_scenario("fig2");
  s.noise.dropout_prob = 1.0;
  for (long f = 0; f < s.frame_count(); f += 50) {
    const FrameMessage m = observe(s, f);
    REQUIRE(m.persons.size() == 1);
    CHECK(m.persons[0].keypoints_2d.empty());
    CHECK(m.persons[0].keypoints_3d.empty());
  }
}

TEST_CASE("observe: person behind the camera is not detected") {
  Scenario s = facing_scenario();
  s.humans[0].track.waypoints = {{0.0, Vec3(-3.0, 0.0, 0.0), 0.0}, {1.0, Vec3(-3.0, 0.0, 0.0), 0.0}};
  CHECK(observe(s, 0).persons.empty());
  CHECK_FALSE(ground_truth(s, 0)[0].visible);
}

TEST_CASE("closed loop, noise-free: head yaw within 1 degree and alpha within 1e-3") {
  const Scenario s = resolve_scenario("fig2");
  FrameEstimator est(pipeline_config_for(s));
  double worst_rot = 0.0, worst_alpha = 0.0;
  run_scenario(s, [&](const SimulatedFrame& f) {
    const auto out = est.process(f.observation);
    REQUIRE(out.size() == 1);
    CHECK(out[0].converged);
    worst_rot = std::max(worst_rot, rotation_angle_between(out[0].head_pose.rotation_matrix(),
                                                           f.truth[0].head_pose_camera.rotation_matrix()));
    worst_alpha = std::max(worst_alpha, std::abs(out[0].alpha - f.truth[0].alpha));
  });
  CHECK(worst_rot < 1.0 * kDeg);
  CHECK(worst_alpha < 1e-3);
}

TEST_CASE("scenario files: round-trip, versions, schema errors") {
  const Scenario s = resolve_scenario("fig2");
  const std::string text = serialize_scenario(s);
  CHECK(serialize_scenario(parse_scenario(text)) == text);

  CHECK_THROWS_AS(parse_scenario(R"({"format": "gazecone-scenario", "version": 2})"), VersionError);
  CHECK_THROWS_AS(parse_scenario(R"({"format": "other", "version": 1})"), SchemaError);
  CHECK_THROWS_AS(parse_scenario("{not json"), SchemaError);
  CHECK_THROWS_AS(parse_scenario(R"({"format": "gazecone-scenario", "version": 1, "duration_s": 1})"), SchemaError);

  Scenario bad = s;
  bad.humans[0].track.waypoints[2].t = bad.humans[0].track.waypoints[1].t;
  CHECK_THROWS_AS(bad.validate(), SchemaError);
  bad = s;
  bad.amr_track.waypoints.back().t = 10.0;
  CHECK_THROWS_AS(bad.validate(), SchemaError);
  bad = s;
  bad.fps = 0.0;
  CHECK_THROWS_AS(bad.validate(), SchemaError);
  bad = s;
  bad.humans.push_back(bad.humans[0]);
  CHECK_THROWS_AS(bad.validate(), SchemaError);
  bad = s;
  bad.humans[0].head_yaw = {HeadYawProfile::Kind::sinusoid, 4.0, 2.0, 0.0, {}};
  CHECK_THROWS_AS(bad.validate(), SchemaError);

  CHECK_THROWS_AS(resolve_scenario("/nonexistent/scenario.json"), IoError);
  CHECK(builtin_scenario_names() == std::vector<std::string>{"fig2"});
}

TEST_CASE("trajectory and yaw interpolation") {
  TrajectorySpec t;
  t.waypoints = {{0.0, Vec3(0, 0, 0), 0.0}, {2.0, Vec3(2, 4, 0), 2 * kPi}};
  const PlanarPose mid = t.at(1.0);
  CHECK((mid.position - Vec3(1, 2, 0)).norm() < 1e-15);
  CHECK(std::abs(mid.heading - kPi) < 1e-15);
  CHECK(t.at(-1.0).position == Vec3(0, 0, 0));
  CHECK(t.at(5.0).position == Vec3(2, 4, 0));

  HeadYawProfile sine{HeadYawProfile::Kind::sinusoid, 0.5, 4.0, 0.0, {}};
  CHECK(std::abs(sine.at(1.0) - 0.5) < 1e-15);
  HeadYawProfile keys;
  keys.keyframes = {{0.0, 0.0}, {1.0, 1.0}};
  CHECK(std::abs(keys.at(0.25) - 0.25) < 1e-15);
  CHECK(keys.at(3.0) == 1.0);
}

TEST_CASE("frame_at and time_of") {
  const Scenario s = resolve_scenario("fig2");
  CHECK(s.frame_at(5.65) == 339);
  CHECK(s.time_of(600) == 10.0);
  CHECK(s.frame_at(100.0) == 1499);
  CHECK(s.frame_at(-1.0) == 0);
}

TEST_CASE("ground-truth CSV rows") {
  const Scenario s = resolve_scenario("fig2");
  const auto r = ground_truth(s, 339)[0];
  const std::string row = ground_truth_csv_row(r);
  const std::string header = ground_truth_csv_header();
  CHECK(std::count(row.begin(), row.end(), ',') == std::count(header.begin(), header.end(), ','));
  CHECK(row.find(",case1,") != std::string::npos);
}
