#pragma once

// Throughput of the geometry pipeline on a pre-serialized simulated stream.

#include <string>

#include "gazecone/config.hpp"
#include "gazecone/scenario.hpp"

namespace gazecone {

struct BenchReport {
  long frames = 0;
  long persons = 0;
  long converged = 0;
  long pnp_iterations = 0;
  int repeats = 0;
  double parse_s = 0.0;
  double head_s = 0.0;   // skeleton processing and PnP
  double score_s = 0.0;  // awareness and smoothing
  double wall_s = 0.0;

  // Zero when no frames ran.
  double frames_per_second() const;
  std::string to_text() const;
};

// Work counts are per repeat and deterministic; only the timings vary.
BenchReport run_bench(const Scenario& scenario, const PipelineConfig& config, int repeats = 1);

}  // namespace gazecone
