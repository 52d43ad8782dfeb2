#pragma once

// Frame-level estimation: person selection, skeleton processing, PnP,
// awareness scoring, optional smoothing, and the streaming CSV driver.

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "gazecone/awareness.hpp"
#include "gazecone/config.hpp"
#include "gazecone/frame.hpp"

namespace gazecone {

// max_confidence: the single most confident person at or above the
// threshold, ties to the lower person_id. all: every person at or above the
// threshold, in person_id order.
std::vector<PersonDetection> select_persons(const FrameMessage& frame, SelectionPolicy policy,
                                            double confidence_threshold);

// Per-person exponential smoothing of alpha: a' = beta a_prev + (1 - beta) a.
// The first sample of a person passes through; a non-converged sample clears
// that person's state and is emitted with alpha = 0.
class AlphaSmoother {
 public:
  explicit AlphaSmoother(double beta);
  AwarenessSample apply(AwarenessSample sample);
  std::size_t tracked_persons() const { return state_.size(); }

 private:
  double beta_;
  std::map<int, double> state_;
};

// Why a person produced no pose. Counted for diagnostics.
enum class PersonFailure : std::uint8_t { none, skeleton, head, problem, init, behind_camera, numerical };

struct PersonResult {
  HeadEstimate head;
  PersonFailure failure = PersonFailure::none;
  int pnp_iterations = 0;
};

struct EstimatorStats {
  long frames = 0;
  long persons = 0;
  long converged = 0;
  long pnp_iterations = 0;
  std::map<PersonFailure, long> failures;
};

class FrameEstimator {
 public:
  explicit FrameEstimator(PipelineConfig config);

  // Skeleton rescaling, head frame, and PnP for one detection. Never throws
  // for degenerate input; failures are reported in the result.
  PersonResult estimate_head(const PersonDetection& person) const;

  // Everything after the head pose: scoring and smoothing for one frame.
  std::vector<AwarenessSample> score(const FrameMessage& frame, const std::vector<PersonResult>& heads);

  // Full per-frame pipeline.
  std::vector<AwarenessSample> process(const FrameMessage& frame);

  const PipelineConfig& config() const { return config_; }
  const EstimatorStats& stats() const { return stats_; }

 private:
  PipelineConfig config_;
  double half_angle_;
  AmrGeometry amr_;
  AlphaSmoother smoother_;
  EstimatorStats stats_;
};

// CSV columns of the awareness output.
std::string awareness_csv_header(bool with_pose);
std::string awareness_csv_row(const AwarenessSample& s, bool with_pose);

struct EstimateSummary {
  long lines = 0;
  long rows = 0;
  long unknown_fields = 0;
  EstimatorStats stats;
};

// Reads frame lines from `in`, writes the awareness CSV to `out`. Memory use
// does not grow with stream length. Throws SchemaError or VersionError (with
// the input line number) and IoError.
EstimateSummary estimate_stream(std::istream& in, std::ostream& out, const PipelineConfig& config,
                                bool with_pose = false);

}  // namespace gazecone
