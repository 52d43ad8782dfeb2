#include <doctest.h>

#include <sstream>

#include "gazecone/errors.hpp"
#include "gazecone/simulator.hpp"
#include "gazecone/skeleton.hpp"
#include "test_support.hpp"

using namespace gazecone;
using namespace gazecone::testing;

namespace {

CanonicalSkeleton3D canonical_from(const Skeleton3D& s) {
  CanonicalSkeleton3D c;
  c.keypoints = s.keypoints;
  return c;
}

// Random non-degenerate head: nose forward of the ears, skull jittered.
MetricSkeleton3D random_head(Sampler& rng) {
  MetricSkeleton3D s = frontal_head();
  for (auto id : {KeypointId::left_eye, KeypointId::right_eye, KeypointId::left_ear, KeypointId::right_ear,
                  KeypointId::neck}) {
    s.keypoints.set(id, s.keypoints.at(id) + rng.vec(-0.01, 0.01));
  }
  return s;
}

MetricSkeleton3D swap_sides(const MetricSkeleton3D& s) {
  MetricSkeleton3D m = s;
  const std::pair<KeypointId, KeypointId> pairs[] = {{KeypointId::left_eye, KeypointId::right_eye},
                                                     {KeypointId::left_ear, KeypointId::right_ear},
                                                     {KeypointId::left_shoulder, KeypointId::right_shoulder}};
  for (const auto& [l, r] : pairs) {
    m.keypoints.set(l, s.keypoints.at(r));
    m.keypoints.set(r, s.keypoints.at(l));
  }
  return m;
}

void check_frame_invariants(const HeadFrame& f) {
  CHECK(std::abs(f.x_hat.vec().dot(f.y_hat.vec())) < 1e-9);
  CHECK(std::abs(f.y_hat.vec().dot(f.z_hat.vec())) < 1e-9);
  CHECK(std::abs(f.x_hat.vec().dot(f.z_hat.vec())) < 1e-9);
  CHECK(std::abs(f.basis().determinant() - 1.0) < 1e-9);
}

}  // namespace

TEST_CASE("keypoint names round-trip") {
  for (std::size_t i = 0; i < kKeypointCount; ++i) {
    const auto id = static_cast<KeypointId>(i);
    CHECK(keypoint_from_name(keypoint_name(id)) == id);
  }
  CHECK_FALSE(keypoint_from_name("tail").has_value());
  CHECK(index_of(KeypointId::neck) == 17);
}

TEST_CASE("rescale_to_metric: shoulders 0.9 apart scale by 0.5") {
  CanonicalSkeleton3D c;
  c.keypoints.set(KeypointId::nose, Vec3(0.2, -0.4, 3.0));
  c.keypoints.set(KeypointId::left_shoulder, Vec3(-0.45, 0.0, 3.0));
  c.keypoints.set(KeypointId::right_shoulder, Vec3(0.45, 0.0, 3.0));
  c.keypoints.set(KeypointId::left_hip, Vec3(-0.3, 1.0, 3.1));
  const MetricSkeleton3D m = rescale_to_metric(c);
  CHECK(m.keypoints.at(KeypointId::nose).norm() < 1e-12);
  const double span = (m.keypoints.at(KeypointId::left_shoulder) - m.keypoints.at(KeypointId::right_shoulder)).norm();
  CHECK(std::abs(span - 0.45) < 1e-9);
  const Vec3 expect_hip = 0.5 * (Vec3(-0.3, 1.0, 3.1) - Vec3(0.2, -0.4, 3.0));
  CHECK((m.keypoints.at(KeypointId::left_hip) - expect_hip).norm() < 1e-12);
}

TEST_CASE("rescale_to_metric: already metric and nose-centered is unchanged") {
  const MetricSkeleton3D s = frontal_head();
  const MetricSkeleton3D m = rescale_to_metric(canonical_from(s));
  for (std::size_t i = 0; i < kKeypointCount; ++i) {
    const auto id = static_cast<KeypointId>(i);
    CHECK(s.keypoints.has(id) == m.keypoints.has(id));
    if (s.keypoints.has(id)) CHECK((s.keypoints.at(id) - m.keypoints.at(id)).norm() < 1e-12);
  }
}

TEST_CASE("rescale_to_metric: degenerate shoulders and missing nose") {
  CanonicalSkeleton3D c;
  c.keypoints.set(KeypointId::nose, Vec3(0, 0, 1));
  c.keypoints.set(KeypointId::left_shoulder, Vec3(0.1, 0.2, 1));
  c.keypoints.set(KeypointId::right_shoulder, Vec3(0.1, 0.2, 1));
  CHECK_THROWS_AS(rescale_to_metric(c), DegenerateSkeleton);
  c.keypoints.erase(KeypointId::right_shoulder);
  CHECK_THROWS_AS(rescale_to_metric(c), DegenerateSkeleton);
  c.keypoints.set(KeypointId::right_shoulder, Vec3(0.5, 0.2, 1));
  c.keypoints.erase(KeypointId::nose);
  CHECK_THROWS_AS(rescale_to_metric(c), DegenerateSkeleton);
}

TEST_CASE("rescale_to_metric: single global scale preserves distance ratios") {
  Sampler rng(201);
  for (int trial = 0; trial < 1000; ++trial) {
    CanonicalSkeleton3D c;
    for (std::size_t i = 0; i < kBodyKeypointCount; ++i) c.keypoints.set(static_cast<KeypointId>(i), rng.vec(-2, 2));
    if ((c.keypoints.at(KeypointId::left_shoulder) - c.keypoints.at(KeypointId::right_shoulder)).norm() < 1e-3) continue;
    AnthropometricTable table;
    table.shoulder_span = rng.uniform(0.3, 0.6);
    const MetricSkeleton3D m = rescale_to_metric(c, table);
    const auto dist = [](const Skeleton3D& s, KeypointId a, KeypointId b) {
      return (s.keypoints.at(a) - s.keypoints.at(b)).norm();
    };
    CHECK(std::abs(dist(m, KeypointId::left_shoulder, KeypointId::right_shoulder) - table.shoulder_span) < 1e-9);
    const double r_c = dist(c, KeypointId::left_hip, KeypointId::right_knee) / dist(c, KeypointId::nose, KeypointId::left_wrist);
    const double r_m = dist(m, KeypointId::left_hip, KeypointId::right_knee) / dist(m, KeypointId::nose, KeypointId::left_wrist);
    CHECK(std::abs(r_c - r_m) < 1e-9 * std::max(1.0, r_c));
  }
}

TEST_CASE("synthesize_neck") {
  Skeleton3D s;
  s.keypoints.set(KeypointId::left_shoulder, Vec3(-0.225, 0, 0));
  s.keypoints.set(KeypointId::right_shoulder, Vec3(0.225, 0, 0));
  const Skeleton3D with = synthesize_neck(s);
  CHECK(with.keypoints.at(KeypointId::neck).norm() == 0.0);
  CHECK(with.neck_derived);

  Skeleton3D explicit_neck = s;
  explicit_neck.keypoints.set(KeypointId::neck, Vec3(0.0, 0.05, 0.01));
  const Skeleton3D kept = synthesize_neck(explicit_neck);
  CHECK(kept.keypoints.at(KeypointId::neck) == Vec3(0.0, 0.05, 0.01));
  CHECK_FALSE(kept.neck_derived);

  s.keypoints.erase(KeypointId::left_shoulder);
  CHECK_THROWS_AS(synthesize_neck(s), DegenerateSkeleton);

  Skeleton2D s2;
  s2.keypoints.set(KeypointId::left_shoulder, {{100.0, 200.0}, 0.9});
  s2.keypoints.set(KeypointId::right_shoulder, {{140.0, 210.0}, 0.6});
  const Skeleton2D n2 = synthesize_neck(s2);
  CHECK(n2.keypoints.at(KeypointId::neck).pixel.u == 120.0);
  CHECK(n2.keypoints.at(KeypointId::neck).pixel.v == 205.0);
  CHECK(n2.keypoints.at(KeypointId::neck).confidence == 0.6);
}

TEST_CASE("initial_gaze: reference body faces its constructed direction") {
  const Skeleton3D body = ReferenceBody::body_frame(0.0);
  CHECK((initial_gaze(body).vec() - Vec3::UnitY()).norm() < 1e-6);
  const Skeleton3D turned = ReferenceBody::body_frame(kPi / 2);
  CHECK((initial_gaze(turned).vec() - Vec3(-1.0, 0.0, 0.0)).norm() < 1e-6);
}

TEST_CASE("initial_gaze: degenerate inputs") {
  MetricSkeleton3D s = frontal_head();
  s.keypoints.set(KeypointId::right_ear, s.keypoints.at(KeypointId::left_ear));
  CHECK_THROWS_AS(initial_gaze(s), DegenerateHead);

  s = frontal_head();
  s.keypoints.set(KeypointId::neck, s.keypoints.at(KeypointId::nose));
  CHECK_THROWS_AS(initial_gaze(s), DegenerateHead);

  s = frontal_head();  // ear axis parallel to nose - neck
  s.keypoints.set(KeypointId::left_ear, Vec3(0.0, 0.05, 0.09));
  s.keypoints.set(KeypointId::right_ear, Vec3(0.0, -0.05, -0.09));
  CHECK_THROWS_AS(initial_gaze(s), DegenerateHead);

  s = frontal_head();
  s.keypoints.erase(KeypointId::left_ear);
  CHECK_THROWS_AS(initial_gaze(s), DegenerateHead);
  CHECK_THROWS_AS(head_frame(s), DegenerateHead);
}

TEST_CASE("initial_gaze and head_frame: rigid-motion equivariance") {
  Sampler rng(202);
  for (int i = 0; i < 1000; ++i) {
    const MetricSkeleton3D s = random_head(rng);
    const RigidTransform t = rng.transform();
    const Mat3 r = t.rotation_matrix();
    const MetricSkeleton3D moved = transformed(s, t);
    CHECK((initial_gaze(moved).vec() - r * initial_gaze(s).vec()).norm() < 1e-9);
    const HeadFrame a = head_frame(s), b = head_frame(moved);
    CHECK((b.basis() - r * a.basis()).cwiseAbs().maxCoeff() < 1e-9);
    CHECK((b.origin - transform_apply(t, a.origin)).norm() < 1e-9);
  }
}

TEST_CASE("head_frame: invariants, gaze kept exact, face-exit sign") {
  Sampler rng(203);
  for (int i = 0; i < 1000; ++i) {
    const MetricSkeleton3D s = transformed(random_head(rng), rng.transform());
    const HeadFrame f = head_frame(s);
    check_frame_invariants(f);
    CHECK((f.y_hat.vec() - initial_gaze(s).vec()).norm() < 1e-12);
    const Vec3 ear_mid = 0.5 * (s.keypoints.at(KeypointId::left_ear) + s.keypoints.at(KeypointId::right_ear));
    CHECK(f.y_hat.vec().dot(s.keypoints.at(KeypointId::nose) - ear_mid) > 0.0);
    CHECK(f.z_hat.vec().dot(s.keypoints.at(KeypointId::right_ear) - s.keypoints.at(KeypointId::left_ear)) > 0.0);
  }
}

TEST_CASE("head_frame: swapping left and right negates z and keeps y") {
  Sampler rng(204);
  for (int i = 0; i < 1000; ++i) {
    const MetricSkeleton3D s = transformed(random_head(rng), rng.transform());
    const HeadFrame a = head_frame(s), b = head_frame(swap_sides(s));
    CHECK((a.y_hat.vec() - b.y_hat.vec()).norm() < 1e-12);
    CHECK((a.z_hat.vec() + b.z_hat.vec()).norm() < 1e-12);
  }
}

TEST_CASE("head_frame: reference body") {
  const HeadFrame f = head_frame(ReferenceBody::body_frame(0.3));
  check_frame_invariants(f);
  CHECK(f.origin == ReferenceBody::body_frame(0.3).keypoints.at(KeypointId::nose));
}

TEST_CASE("face_center") {
  Skeleton3D s;
  s.keypoints.set(KeypointId::nose, Vec3(0, 0, 0));
  s.keypoints.set(KeypointId::left_ear, Vec3(-0.08, -0.10, 0.02));
  s.keypoints.set(KeypointId::right_ear, Vec3(0.08, -0.10, 0.02));
  const Vec3 c = face_center(s);
  CHECK(std::abs(c.x()) < 1e-12);
  CHECK(std::abs(c.y() - (-0.0667)) < 1e-4);
  CHECK(std::abs(c.z() - 0.0133) < 1e-4);

  Skeleton3D sym;
  const Vec3 pts[] = {{0, 0.1, 0}, {0.05, 0, 0.02}, {-0.05, 0, 0.02}, {0.08, -0.1, -0.01}, {-0.08, -0.1, -0.01}};
  Vec3 mean = Vec3::Zero();
  for (std::size_t i = 0; i < 5; ++i) {
    sym.keypoints.set(kFaceKeypoints[i], pts[i]);
    mean += pts[i] / 5.0;
  }
  CHECK((face_center(sym) - mean).norm() < 1e-15);

  Skeleton3D only_nose;
  only_nose.keypoints.set(KeypointId::nose, Vec3::Zero());
  CHECK_THROWS_AS(face_center(only_nose), DegenerateHead);
}

TEST_CASE("gate_by_confidence drops both views and keeps a measured neck") {
  Skeleton2D s2;
  Skeleton3D s3;
  s2.keypoints.set(KeypointId::nose, {{1, 1}, 0.9});
  s2.keypoints.set(KeypointId::left_ear, {{1, 1}, 0.1});
  s3.keypoints.set(KeypointId::nose, Vec3(0, 0, 1));
  s3.keypoints.set(KeypointId::left_ear, Vec3(0, 0, 1));
  s3.keypoints.set(KeypointId::right_ear, Vec3(0, 0, 1));  // no 2D counterpart
  s3.keypoints.set(KeypointId::neck, Vec3(0, 0, 1));
  gate_by_confidence(s2, s3, 0.3);
  CHECK(s2.keypoints.has(KeypointId::nose));
  CHECK_FALSE(s2.keypoints.has(KeypointId::left_ear));
  CHECK_FALSE(s3.keypoints.has(KeypointId::left_ear));
  CHECK_FALSE(s3.keypoints.has(KeypointId::right_ear));
  CHECK(s3.keypoints.has(KeypointId::neck));
}

TEST_CASE("AnthropometricTable parse and validate") {
  std::istringstream in("# table\nshoulder_span = 0.5\nanthropometric.ear_span=0.15  # wide\n\n");
  const AnthropometricTable t = AnthropometricTable::parse(in);
  CHECK(t.shoulder_span == 0.5);
  CHECK(t.ear_span == 0.15);
  CHECK(t.nose_to_neck == 0.18);

  std::istringstream unknown("tail = 1\n");
  CHECK_THROWS_AS(AnthropometricTable::parse(unknown), ConfigError);
  std::istringstream bad("shin = short\n");
  CHECK_THROWS_AS(AnthropometricTable::parse(bad), ConfigError);
  std::istringstream negative("thigh = -1\n");
  CHECK_THROWS_AS(AnthropometricTable::parse(negative), ConfigError);
}
