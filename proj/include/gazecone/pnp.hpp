#pragma once

// Head pose from 2D/3D keypoint correspondences by Levenberg-Marquardt
// minimization of the pixel reprojection error.

#include <Eigen/Core>
#include <vector>

#include "gazecone/geometry.hpp"
#include "gazecone/skeleton.hpp"

namespace gazecone {

struct Correspondence {
  KeypointId id;
  Vec3 model_point;  // head frame, meters
  Pixel image_point;
};

struct PnPProblem {
  std::vector<Correspondence> correspondences;  // sorted by KeypointId
  CameraIntrinsics intrinsics;

  // Sorts by KeypointId and checks the size invariant (>= 4, unique ids).
  // Throws DegenerateProblem.
  void normalize();
};

struct PnPConfig {
  int max_iterations = 100;
  double residual_tolerance = 1e-6;  // pixels, RMSE
  double step_tolerance = 1e-10;     // norm of the (r, t) update
  double damping_init = 1e-3;

  void validate() const;
};

struct PnPSolution {
  RigidTransform pose;  // head -> camera
  double reprojection_rmse = 0.0;
  int iterations = 0;
  bool converged = false;
};

using ResidualVector = Eigen::VectorXd;
using ResidualJacobian = Eigen::Matrix<double, Eigen::Dynamic, 6>;

// Stacked (u, v) residuals pi(R p + t) - u_obs in correspondence order.
// Throws BehindCamera if a posed model point has z <= 0.
ResidualVector reprojection_residuals(const RigidTransform& pose, const PnPProblem& prob);

// d(residuals)/d(r, t), columns ordered rx, ry, rz, tx, ty, tz.
ResidualJacobian residual_jacobian(const RigidTransform& pose, const PnPProblem& prob);

double reprojection_rmse(const RigidTransform& pose, const PnPProblem& prob);

// Initial head->camera pose from the lifted skeleton: rotation is the head
// basis in camera axes, depth from the metric vs pixel extent of a keypoint
// pair (ears preferred), x/y by back-projecting the 2D face centroid.
// Throws DegenerateInit.
RigidTransform initialize_pose(const PnPProblem& prob, const HeadFrame& frame,
                               const MetricSkeleton3D& skeleton);

// Throws BehindCamera if the initial pose puts a point behind the camera,
// DegenerateProblem for fewer than 4 usable points, NumericalFailure on
// non-finite arithmetic.
PnPSolution solve_pnp(const PnPProblem& prob, const RigidTransform& init,
                      const PnPConfig& cfg = {});

// Head keypoints used for PnP: the face points, plus the neck when fewer than
// four face points are available in both views.
std::vector<KeypointId> head_keypoint_subset(const Skeleton2D& s2d, const Skeleton3D& s3d);

// Correspondences for `ids` with model points in head-frame coordinates.
PnPProblem make_head_problem(const std::vector<KeypointId>& ids, const Skeleton2D& s2d,
                             const MetricSkeleton3D& skeleton, const HeadFrame& frame,
                             const CameraIntrinsics& intrinsics);

}  // namespace gazecone
