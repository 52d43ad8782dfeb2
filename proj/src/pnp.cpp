#include "gazecone/pnp.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "gazecone/errors.hpp"

namespace gazecone {

namespace {

// d(R(r) p)/dr for the rotation-vector parameterization (Gallego & Yezzi).
Mat3 rotated_point_derivative(const Vec3& r, const Mat3& rot, const Vec3& p) {
  const double theta2 = r.squaredNorm();
  if (theta2 < 1e-16) return -skew(p);
  const Mat3 lhs = r * r.transpose() + (rot.transpose() - Mat3::Identity()) * skew(r);
  return -rot * skew(p) * lhs / theta2;
}

// Residuals, or nullopt when a point falls behind the camera.
bool try_residuals(const Mat3& rot, const Vec3& t, const PnPProblem& prob, ResidualVector& out) {
  const auto& k = prob.intrinsics;
  out.resize(2 * static_cast<Eigen::Index>(prob.correspondences.size()));
  Eigen::Index row = 0;
  for (const auto& c : prob.correspondences) {
    const Vec3 x = rot * c.model_point + t;
    if (!(x.z() > 0.0)) return false;
    out(row++) = k.fx * x.x() / x.z() + k.cx - c.image_point.u;
    out(row++) = k.fy * x.y() / x.z() + k.cy - c.image_point.v;
  }
  return true;
}

double rmse_of(const ResidualVector& r) {
  return r.size() == 0 ? 0.0 : std::sqrt(r.squaredNorm() / (0.5 * static_cast<double>(r.size())));
}

}  // namespace

void PnPProblem::normalize() {
  std::sort(correspondences.begin(), correspondences.end(),
            [](const Correspondence& a, const Correspondence& b) { return a.id < b.id; });
  for (std::size_t i = 1; i < correspondences.size(); ++i) {
    if (correspondences[i].id == correspondences[i - 1].id) {
      throw DegenerateProblem("duplicate correspondence for " +
                              std::string(keypoint_name(correspondences[i].id)));
    }
  }
  if (correspondences.size() < 4) {
    throw DegenerateProblem("PnP needs at least 4 correspondences, got " +
                            std::to_string(correspondences.size()));
  }
}

void PnPConfig::validate() const {
  if (max_iterations < 1) throw ConfigError("pnp.max_iterations must be >= 1");
  if (!(residual_tolerance > 0.0)) throw ConfigError("pnp.residual_tolerance must be > 0");
  if (!(step_tolerance > 0.0)) throw ConfigError("pnp.step_tolerance must be > 0");
  if (!(damping_init > 0.0)) throw ConfigError("pnp.damping_init must be > 0");
}

ResidualVector reprojection_residuals(const RigidTransform& pose, const PnPProblem& prob) {
  ResidualVector r;
  if (!try_residuals(pose.rotation_matrix(), pose.translation, prob, r)) {
    throw BehindCamera("posed model point is behind the camera");
  }
  return r;
}

double reprojection_rmse(const RigidTransform& pose, const PnPProblem& prob) {
  return rmse_of(reprojection_residuals(pose, prob));
}

ResidualJacobian residual_jacobian(const RigidTransform& pose, const PnPProblem& prob) {
  const auto& k = prob.intrinsics;
  const Vec3& r = pose.rotation.axis_angle;
  const Mat3 rot = pose.rotation_matrix();
  ResidualJacobian jac(2 * static_cast<Eigen::Index>(prob.correspondences.size()), 6);
  Eigen::Index row = 0;
  for (const auto& c : prob.correspondences) {
    const Vec3 x = rot * c.model_point + pose.translation;
    if (!(x.z() > 0.0)) throw BehindCamera("posed model point is behind the camera");
    const double iz = 1.0 / x.z();
    Eigen::Matrix<double, 2, 3> dproj;
    dproj << k.fx * iz, 0.0, -k.fx * x.x() * iz * iz,
             0.0, k.fy * iz, -k.fy * x.y() * iz * iz;
    jac.block<2, 3>(row, 0) = dproj * rotated_point_derivative(r, rot, c.model_point);
    jac.block<2, 3>(row, 3) = dproj;
    row += 2;
  }
  return jac;
}

RigidTransform initialize_pose(const PnPProblem& prob, const HeadFrame& frame,
                               const MetricSkeleton3D& skeleton) {
  const auto& k = prob.intrinsics;
  const auto find = [&](KeypointId id) -> const Correspondence* {
    for (const auto& c : prob.correspondences) {
      if (c.id == id) return &c;
    }
    return nullptr;
  };
  const auto* le = find(KeypointId::left_ear);
  const auto* re = find(KeypointId::right_ear);
  if (le == nullptr || re == nullptr) throw DegenerateInit("ear pair not visible in 2D");

  // Normalized image-plane separation of two correspondences.
  const auto image_sep = [&](const Correspondence& a, const Correspondence& b) {
    return std::hypot((a.image_point.u - b.image_point.u) / k.fx,
                      (a.image_point.v - b.image_point.v) / k.fy);
  };
  // Metric separation perpendicular to the optical axis. The skeleton is in
  // camera axes, so this is the extent the image actually sees.
  const auto metric_sep = [&](KeypointId a, KeypointId b) {
    const Vec3 d = skeleton.keypoints.at(a) - skeleton.keypoints.at(b);
    return std::hypot(d.x(), d.y());
  };

  const double ear_pixels = image_sep(*le, *re);
  if (!(ear_pixels > 1e-12)) throw DegenerateInit("ears project to the same pixel");
  if (!skeleton.keypoints.has(KeypointId::left_ear) || !skeleton.keypoints.has(KeypointId::right_ear)) {
    throw DegenerateInit("ear pair missing from skeleton");
  }
  const double ear_full =
      (skeleton.keypoints.at(KeypointId::left_ear) - skeleton.keypoints.at(KeypointId::right_ear)).norm();
  double depth = metric_sep(KeypointId::left_ear, KeypointId::right_ear) / ear_pixels;

  // Near profile views the ear pair is foreshortened; switch to the pair
  // with the widest metric extent across the image plane.
  if (metric_sep(KeypointId::left_ear, KeypointId::right_ear) < 0.3 * ear_full) {
    double best = 0.0;
    for (std::size_t i = 0; i < prob.correspondences.size(); ++i) {
      for (std::size_t j = i + 1; j < prob.correspondences.size(); ++j) {
        const auto& a = prob.correspondences[i];
        const auto& b = prob.correspondences[j];
        if (!skeleton.keypoints.has(a.id) || !skeleton.keypoints.has(b.id)) continue;
        const double m = metric_sep(a.id, b.id);
        const double px = image_sep(a, b);
        if (m > best && px > 1e-12) {
          best = m;
          depth = m / px;
        }
      }
    }
  }
  if (!(depth > 0.0) || !std::isfinite(depth)) throw DegenerateInit("cannot estimate depth");

  Pixel centroid;
  for (const auto& c : prob.correspondences) {
    centroid.u += c.image_point.u;
    centroid.v += c.image_point.v;
  }
  const double n = static_cast<double>(prob.correspondences.size());
  centroid.u /= n;
  centroid.v /= n;

  return {matrix_to_rotation(frame.basis()), back_project(k, centroid, depth)};
}

PnPSolution solve_pnp(const PnPProblem& prob, const RigidTransform& init, const PnPConfig& cfg) {
  cfg.validate();
  if (prob.correspondences.size() < 4) {
    throw DegenerateProblem("PnP needs at least 4 correspondences");
  }
  {
    // Model points must span more than a line for the pose to be observable.
    Vec3 mean = Vec3::Zero();
    for (const auto& c : prob.correspondences) mean += c.model_point;
    mean /= static_cast<double>(prob.correspondences.size());
    Mat3 scatter = Mat3::Zero();
    for (const auto& c : prob.correspondences) {
      const Vec3 d = c.model_point - mean;
      scatter += d * d.transpose();
    }
    Eigen::SelfAdjointEigenSolver<Mat3> eig(scatter, Eigen::EigenvaluesOnly);
    const auto ev = eig.eigenvalues();
    if (!(ev(2) > 0.0) || ev(1) <= 1e-10 * ev(2)) {
      throw DegenerateProblem("model points are collinear");
    }
  }

  RigidTransform pose = init;
  Mat3 rot = pose.rotation_matrix();
  ResidualVector res;
  if (!try_residuals(rot, pose.translation, prob, res)) {
    throw BehindCamera("initial pose places a model point behind the camera");
  }
  double cost = res.squaredNorm();
  if (!std::isfinite(cost)) throw NumericalFailure("non-finite initial residual");

  PnPSolution sol;
  sol.pose = pose;
  sol.reprojection_rmse = rmse_of(res);
  if (sol.reprojection_rmse < cfg.residual_tolerance) {
    sol.converged = pose.translation.z() > 0.0;
    return sol;
  }

  double lambda = cfg.damping_init;
  int growth_streak = 0;
  bool need_jacobian = true;
  ResidualJacobian jac;
  Eigen::Matrix<double, 6, 6> jtj;
  Eigen::Matrix<double, 6, 1> jtr;
  ResidualVector trial_res;

  for (int iter = 1; iter <= cfg.max_iterations; ++iter) {
    sol.iterations = iter;
    if (need_jacobian) {
      jac = residual_jacobian(pose, prob);
      jtj = jac.transpose() * jac;
      jtr = jac.transpose() * res;
      need_jacobian = false;
    }
    Eigen::Matrix<double, 6, 6> damped = jtj;
    for (int d = 0; d < 6; ++d) damped(d, d) += lambda * std::max(jtj(d, d), 1e-12);
    const Eigen::Matrix<double, 6, 1> step = damped.ldlt().solve(-jtr);
    if (!step.allFinite()) throw NumericalFailure("non-finite LM step");

    const double step_norm = step.norm();
    RigidTransform trial(RotationVec(pose.rotation.axis_angle + step.head<3>()).canonical(),
                         pose.translation + step.tail<3>());
    const Mat3 trial_rot = trial.rotation_matrix();
    const bool in_front = try_residuals(trial_rot, trial.translation, prob, trial_res);
    const double trial_cost = in_front ? trial_res.squaredNorm() : std::numeric_limits<double>::infinity();
    if (in_front && !std::isfinite(trial_cost)) throw NumericalFailure("non-finite residual");

    if (trial_cost < cost) {
      const double previous_rmse = sol.reprojection_rmse;
      pose = trial;
      rot = trial_rot;
      res = trial_res;
      cost = trial_cost;
      lambda = std::max(lambda / 10.0, 1e-15);
      need_jacobian = true;
      sol.pose = pose;
      sol.reprojection_rmse = rmse_of(res);
      // Accepted steps decrease cost by construction; growth means broken arithmetic.
      growth_streak = sol.reprojection_rmse > previous_rmse ? growth_streak + 1 : 0;
      if (growth_streak >= 10) throw NumericalFailure("reprojection error grew across accepted steps");
      if (sol.reprojection_rmse < cfg.residual_tolerance || step_norm < cfg.step_tolerance) {
        sol.converged = true;
        break;
      }
    } else {
      lambda *= 10.0;
      // The minimum is reached to within round-off when even tiny steps fail.
      if (step_norm < cfg.step_tolerance || lambda > 1e16) {
        sol.converged = true;
        break;
      }
    }
  }

  sol.pose.rotation = sol.pose.rotation.canonical();
  if (!(sol.pose.translation.z() > 0.0)) sol.converged = false;
  return sol;
}

std::vector<KeypointId> head_keypoint_subset(const Skeleton2D& s2d, const Skeleton3D& s3d) {
  std::vector<KeypointId> ids;
  for (KeypointId id : kFaceKeypoints) {
    if (s2d.keypoints.has(id) && s3d.keypoints.has(id)) ids.push_back(id);
  }
  if (ids.size() < 4 && s2d.keypoints.has(KeypointId::neck) && s3d.keypoints.has(KeypointId::neck)) {
    ids.push_back(KeypointId::neck);
  }
  return ids;
}

PnPProblem make_head_problem(const std::vector<KeypointId>& ids, const Skeleton2D& s2d,
                             const MetricSkeleton3D& skeleton, const HeadFrame& frame,
                             const CameraIntrinsics& intrinsics) {
  PnPProblem prob;
  prob.intrinsics = intrinsics;
  const Mat3 basis_t = frame.basis().transpose();
  for (KeypointId id : ids) {
    prob.correspondences.push_back(
        {id, basis_t * (skeleton.keypoints.at(id) - frame.origin), s2d.keypoints.at(id).pixel});
  }
  prob.normalize();
  return prob;
}

}  // namespace gazecone
