#pragma once

// Forward-synthesized head-pose problems with a known answer.

#include <Eigen/Geometry>
#include <algorithm>

#include "gazecone/pnp.hpp"
#include "gazecone/simulator.hpp"
#include "test_support.hpp"

namespace gazecone::testing {

struct SyntheticHead {
  RigidTransform truth;      // head -> camera
  MetricSkeleton3D metric;   // camera axes, nose at the origin
  HeadFrame frame;           // from `metric`
  Skeleton2D image;          // projections, optionally noisy
  PnPProblem problem;
};

// Reference-body head keypoints in head-frame coordinates (nose at origin).
inline KeypointMap<Vec3> head_model() {
  const Skeleton3D body = ReferenceBody::body_frame(0.0);
  const HeadFrame f = head_frame(body);
  KeypointMap<Vec3> m;
  for (auto id : kFaceKeypoints) m.set(id, f.to_head(body.keypoints.at(id)));
  m.set(KeypointId::neck, f.to_head(body.keypoints.at(KeypointId::neck)));
  return m;
}

// Head facing the camera: gaze -z_cam, right ear toward -x_cam, head x (down) +y_cam.
inline Mat3 frontal_rotation() {
  Mat3 b;
  b.col(0) = Vec3(0.0, 1.0, 0.0);
  b.col(1) = Vec3(0.0, 0.0, -1.0);
  b.col(2) = Vec3(-1.0, 0.0, 0.0);
  return b;
}

// Yaw turns about the head's up axis (-x), pitch about the ear axis (z).
inline Mat3 head_rotation(double yaw, double pitch) {
  return frontal_rotation() * Eigen::AngleAxisd(yaw, -Vec3::UnitX()).toRotationMatrix() *
         Eigen::AngleAxisd(pitch, Vec3::UnitZ()).toRotationMatrix();
}

inline SyntheticHead make_synthetic_head(const RigidTransform& truth, const CameraIntrinsics& k, Sampler* noise,
                                         double pixel_sigma) {
  SyntheticHead h;
  h.truth = truth;
  const KeypointMap<Vec3> model = head_model();
  const Vec3 nose_cam = transform_apply(truth, model.at(KeypointId::nose));
  for (auto id : kFaceKeypoints) {
    const Vec3 p = transform_apply(truth, model.at(id));
    h.metric.keypoints.set(id, p - nose_cam);
    Pixel px = project(k, p);
    if (noise != nullptr && pixel_sigma > 0.0) {
      px.u += noise->normal(pixel_sigma);
      px.v += noise->normal(pixel_sigma);
    }
    h.image.keypoints.set(id, {px, 1.0});
  }
  h.metric.keypoints.set(KeypointId::neck, transform_apply(truth, model.at(KeypointId::neck)) - nose_cam);
  h.frame = head_frame(h.metric);
  h.problem = make_head_problem(head_keypoint_subset(h.image, h.metric), h.image, h.metric, h.frame, k);
  return h;
}

// Pose ranges of the recovery benchmarks: 1.5-5 m, yaw +-80 deg, pitch +-30 deg,
// with the nose somewhere inside the central part of the image.
inline RigidTransform random_head_pose(Sampler& rng, double min_dist = 1.5, double max_dist = 5.0) {
  const double yaw = rng.uniform(-80.0, 80.0) * kDeg;
  const double pitch = rng.uniform(-30.0, 30.0) * kDeg;
  const double dist = rng.uniform(min_dist, max_dist);
  const Vec3 dir = Vec3(rng.uniform(-0.4, 0.4), rng.uniform(-0.2, 0.2), 1.0).normalized();
  return RigidTransform::from_matrix(head_rotation(yaw, pitch), dist * dir);
}

// Face correspondences of head_model() under `pose`, noise-free.
inline PnPProblem simple_problem(const CameraIntrinsics& k, const RigidTransform& pose) {
  PnPProblem p;
  p.intrinsics = k;
  const KeypointMap<Vec3> model = head_model();
  for (auto id : kFaceKeypoints) {
    p.correspondences.push_back({id, model.at(id), project(k, transform_apply(pose, model.at(id)))});
  }
  p.normalize();
  return p;
}

// Central differences, step 1e-6 on each of the six parameters.
inline ResidualJacobian numeric_jacobian(const RigidTransform& pose, const PnPProblem& prob) {
  const double h = 1e-6;
  ResidualJacobian j(2 * prob.correspondences.size(), 6);
  for (int c = 0; c < 6; ++c) {
    RigidTransform plus = pose, minus = pose;
    if (c < 3) {
      plus.rotation.axis_angle(c) += h;
      minus.rotation.axis_angle(c) -= h;
    } else {
      plus.translation(c - 3) += h;
      minus.translation(c - 3) -= h;
    }
    j.col(c) = (reprojection_residuals(plus, prob) - reprojection_residuals(minus, prob)) / (2.0 * h);
  }
  return j;
}

inline double max_relative_error(const ResidualJacobian& a, const ResidualJacobian& b) {
  double worst = 0.0;
  for (int r = 0; r < a.rows(); ++r) {
    for (int c = 0; c < 6; ++c) {
      const double scale = std::max({std::abs(a(r, c)), std::abs(b(r, c)), 1.0});
      worst = std::max(worst, std::abs(a(r, c) - b(r, c)) / scale);
    }
  }
  return worst;
}

}  // namespace gazecone::testing
