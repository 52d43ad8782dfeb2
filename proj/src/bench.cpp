#include "gazecone/bench.hpp"

#include <chrono>
#include <sstream>
#include <vector>

#include "gazecone/errors.hpp"
#include "gazecone/frame_io.hpp"
#include "gazecone/pipeline.hpp"
#include "gazecone/simulator.hpp"
#include "gazecone/text.hpp"

namespace gazecone {

namespace {

using Clock = std::chrono::steady_clock;

double seconds(Clock::duration d) { return std::chrono::duration<double>(d).count(); }

}  // namespace

double BenchReport::frames_per_second() const {
  const long total = frames * static_cast<long>(repeats);
  return total > 0 && wall_s > 0.0 ? static_cast<double>(total) / wall_s : 0.0;
}

std::string BenchReport::to_text() const {
  std::ostringstream out;
  out << "frames: " << frames << "\n"
      << "repeats: " << repeats << "\n"
      << "persons: " << persons << "\n"
      << "converged: " << converged << "\n"
      << "pnp_iterations: " << pnp_iterations << "\n"
      << "parse_s: " << format_double(parse_s) << "\n"
      << "head_s: " << format_double(head_s) << "\n"
      << "score_s: " << format_double(score_s) << "\n"
      << "wall_s: " << format_double(wall_s) << "\n"
      << "frames_per_second: " << format_double(frames_per_second()) << "\n";
  return out.str();
}

BenchReport run_bench(const Scenario& scenario, const PipelineConfig& config, int repeats) {
  if (repeats < 1) throw ConfigError("bench repeats must be at least 1");
  scenario.validate();
  config.validate();

  std::vector<std::string> lines;
  lines.reserve(static_cast<std::size_t>(scenario.frame_count()));
  for (long f = 0; f < scenario.frame_count(); ++f) lines.push_back(serialize_frame(observe(scenario, f)));

  BenchReport rep;
  rep.frames = static_cast<long>(lines.size());
  rep.repeats = repeats;
  Clock::duration parse{}, head{}, score{};
  const auto wall_start = Clock::now();
  for (int r = 0; r < repeats; ++r) {
    FrameEstimator estimator(config);
    long line_number = 0;
    for (const auto& line : lines) {
      const auto t0 = Clock::now();
      const FrameMessage frame = parse_frame(line, ++line_number);
      const auto t1 = Clock::now();
      std::vector<PersonResult> heads;
      for (const auto& p : select_persons(frame, config.selection, config.confidence_threshold)) {
        heads.push_back(estimator.estimate_head(p));
        if (r == 0) {
          ++rep.persons;
          if (heads.back().head.converged) ++rep.converged;
          rep.pnp_iterations += heads.back().pnp_iterations;
        }
      }
      const auto t2 = Clock::now();
      estimator.score(frame, heads);
      const auto t3 = Clock::now();
      parse += t1 - t0;
      head += t2 - t1;
      score += t3 - t2;
    }
  }
  rep.wall_s = seconds(Clock::now() - wall_start);
  rep.parse_s = seconds(parse);
  rep.head_s = seconds(head);
  rep.score_s = seconds(score);
  return rep;
}

}  // namespace gazecone
