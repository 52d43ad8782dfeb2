#include "gazecone/pipeline.hpp"

#include <algorithm>
#include <numbers>
#include <istream>
#include <ostream>

#include "gazecone/errors.hpp"
#include "gazecone/frame_io.hpp"
#include "gazecone/pnp.hpp"
#include "gazecone/skeleton.hpp"
#include "gazecone/text.hpp"

namespace gazecone {

std::vector<PersonDetection> select_persons(const FrameMessage& frame, SelectionPolicy policy,
                                            double confidence_threshold) {
  std::vector<PersonDetection> eligible;
  for (const auto& p : frame.persons) {
    if (p.confidence >= confidence_threshold) eligible.push_back(p);
  }
  std::sort(eligible.begin(), eligible.end(),
            [](const PersonDetection& a, const PersonDetection& b) { return a.person_id < b.person_id; });
  if (policy == SelectionPolicy::all || eligible.empty()) return eligible;
  const auto best = std::max_element(
      eligible.begin(), eligible.end(),
      // Strict comparison keeps the first (lowest id) among equal confidences.
      [](const PersonDetection& a, const PersonDetection& b) { return a.confidence < b.confidence; });
  return {*best};
}

AlphaSmoother::AlphaSmoother(double beta) : beta_(beta) {
  if (!(beta >= 0.0 && beta < 1.0)) throw ConfigError("smoothing beta must be in [0, 1)");
}

AwarenessSample AlphaSmoother::apply(AwarenessSample sample) {
  if (!sample.converged) {
    state_.erase(sample.person_id);
    sample.alpha = 0.0;
    return sample;
  }
  const auto it = state_.find(sample.person_id);
  if (it != state_.end()) {
    sample.alpha = beta_ * it->second + (1.0 - beta_) * sample.alpha;
    it->second = sample.alpha;
  } else {
    state_.emplace(sample.person_id, sample.alpha);
  }
  return sample;
}

FrameEstimator::FrameEstimator(PipelineConfig config)
    : config_(std::move(config)),
      half_angle_((config_.validate(), config_.half_angle())),
      amr_(config_.amr_geometry()),
      smoother_(config_.smoothing_beta) {}

PersonResult FrameEstimator::estimate_head(const PersonDetection& person) const {
  PersonResult result;
  result.head.person_id = person.person_id;
  Skeleton2D s2d = person.skeleton_2d();
  CanonicalSkeleton3D s3d = person.skeleton_3d();
  gate_by_confidence(s2d, s3d, config_.confidence_threshold);

  MetricSkeleton3D metric;
  try {
    metric = rescale_to_metric(synthesize_neck(std::move(s3d)), config_.anthropometrics);
  } catch (const DegenerateSkeleton&) {
    result.failure = PersonFailure::skeleton;
    return result;
  }
  if (s2d.keypoints.has(KeypointId::left_shoulder) && s2d.keypoints.has(KeypointId::right_shoulder)) {
    s2d = synthesize_neck(std::move(s2d));
  }

  try {
    const HeadFrame frame = head_frame(metric);
    const Vec3 apex = frame.to_head(face_center(metric));
    const PnPProblem prob =
        make_head_problem(head_keypoint_subset(s2d, metric), s2d, metric, frame, config_.intrinsics);
    const RigidTransform init = initialize_pose(prob, frame, metric);
    const PnPSolution sol = solve_pnp(prob, init, config_.pnp);
    result.head.head_pose = sol.pose;
    result.head.converged = sol.converged;
    result.head.apex_head = apex;
    result.pnp_iterations = sol.iterations;
  } catch (const DegenerateHead&) {
    result.failure = PersonFailure::head;
  } catch (const DegenerateProblem&) {
    result.failure = PersonFailure::problem;
  } catch (const DegenerateInit&) {
    result.failure = PersonFailure::init;
  } catch (const BehindCamera&) {
    result.failure = PersonFailure::behind_camera;
  } catch (const NumericalFailure&) {
    result.failure = PersonFailure::numerical;
  } catch (const InvalidRotation&) {
    result.failure = PersonFailure::numerical;
  }
  return result;
}

std::vector<AwarenessSample> FrameEstimator::score(const FrameMessage& frame,
                                                   const std::vector<PersonResult>& heads) {
  std::vector<HeadEstimate> estimates;
  estimates.reserve(heads.size());
  for (const auto& h : heads) estimates.push_back(h.head);
  const AmrGeometry amr = frame.amr ? AmrGeometry::from_mount(frame.amr->camera_position,
                                                           frame.amr->camera_pitch_deg * std::numbers::pi / 180.0)
                                    : amr_;
  auto samples = evaluate_frame(estimates, amr, half_angle_, frame.t, frame.frame_index);
  if (config_.smoothing == SmoothingMode::exponential) {
    for (auto& s : samples) s = smoother_.apply(s);
  }
  return samples;
}

std::vector<AwarenessSample> FrameEstimator::process(const FrameMessage& frame) {
  const auto selected = select_persons(frame, config_.selection, config_.confidence_threshold);
  std::vector<PersonResult> heads;
  heads.reserve(selected.size());
  for (const auto& p : selected) {
    heads.push_back(estimate_head(p));
    const auto& r = heads.back();
    stats_.pnp_iterations += r.pnp_iterations;
    if (r.head.converged) ++stats_.converged;
    if (r.failure != PersonFailure::none) ++stats_.failures[r.failure];
  }
  ++stats_.frames;
  stats_.persons += static_cast<long>(selected.size());
  return score(frame, heads);
}

std::string awareness_csv_header(bool with_pose) {
  std::string h = "t,frame_index,person_id,alpha,d_axial,d_perp,d_fwd,d_lat,converged";
  if (with_pose) h += ",rx,ry,rz,tx,ty,tz";
  return h;
}

std::string awareness_csv_row(const AwarenessSample& s, bool with_pose) {
  std::string row;
  row.reserve(160);
  append_double(row, s.t);
  row += ',';
  row += std::to_string(s.frame_index);
  row += ',';
  row += std::to_string(s.person_id);
  for (double v : {s.alpha, s.d_axial, s.d_perp, s.d_fwd, s.d_lat}) {
    row += ',';
    append_double(row, v);
  }
  row += s.converged ? ",1" : ",0";
  if (with_pose) {
    const Vec3& r = s.head_pose.rotation.axis_angle;
    const Vec3& t = s.head_pose.translation;
    for (double v : {r.x(), r.y(), r.z(), t.x(), t.y(), t.z()}) {
      row += ',';
      if (s.has_pose) append_double(row, v);
      else row += "nan";
    }
  }
  return row;
}

EstimateSummary estimate_stream(std::istream& in, std::ostream& out, const PipelineConfig& config,
                                bool with_pose) {
  FrameEstimator estimator(config);
  EstimateSummary summary;
  ParseStats parse_stats;
  out << awareness_csv_header(with_pose) << '\n';
  std::string line;
  std::string rows;
  while (std::getline(in, line)) {
    ++summary.lines;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const FrameMessage frame = parse_frame(line, summary.lines, &parse_stats);
    rows.clear();
    for (const auto& s : estimator.process(frame)) {
      rows += awareness_csv_row(s, with_pose);
      rows += '\n';
      ++summary.rows;
    }
    out << rows;
    if (!out) throw IoError("failed writing output");
  }
  if (in.bad()) throw IoError("failed reading input");
  out.flush();
  summary.unknown_fields = parse_stats.unknown_fields;
  summary.stats = estimator.stats();
  return summary;
}

}  // namespace gazecone
