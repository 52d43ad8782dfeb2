// Command-line front end: simulate, estimate, eval, bench.

#include <fstream>
#include <iostream>
#include <memory>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "gazecone/bench.hpp"
#include "gazecone/config.hpp"
#include "gazecone/errors.hpp"
#include "gazecone/eval.hpp"
#include "gazecone/frame_io.hpp"
#include "gazecone/pipeline.hpp"
#include "gazecone/scenario.hpp"
#include "gazecone/simulator.hpp"

namespace {

using namespace gazecone;

enum ExitCode : int {
  kOk = 0,
  kUsage = 1,
  kSchema = 2,
  kVersion = 3,
  kAlignment = 4,
  kIo = 5,
};

// Flags that mirror PipelineConfig keys. Applied after --config.
struct ConfigFlags {
  std::optional<std::string> file;
  std::vector<std::pair<std::string, std::optional<std::string>>> mirrored;
  std::vector<std::string> sets;

  void attach(CLI::App& app) {
    static const std::pair<const char*, const char*> kFlags[] = {
        {"--fx", "camera.fx"},
        {"--fy", "camera.fy"},
        {"--cx", "camera.cx"},
        {"--cy", "camera.cy"},
        {"--width", "camera.width"},
        {"--height", "camera.height"},
        {"--theta-fov", "awareness.theta_fov_deg"},
        {"--camera-position", "amr.camera_position"},
        {"--camera-pitch", "amr.camera_pitch_deg"},
        {"--confidence-threshold", "pipeline.confidence_threshold"},
        {"--selection", "pipeline.selection"},
        {"--smoothing", "pipeline.smoothing"},
        {"--smoothing-beta", "pipeline.smoothing_beta"},
        {"--max-iterations", "pnp.max_iterations"},
        {"--residual-tolerance", "pnp.residual_tolerance"},
        {"--step-tolerance", "pnp.step_tolerance"},
        {"--damping-init", "pnp.damping_init"},
    };
    mirrored.reserve(std::size(kFlags));
    app.add_option("--config", file, "key = value config file; flags override it");
    for (const auto& [flag, key] : kFlags) {
      mirrored.emplace_back(key, std::nullopt);
      app.add_option(flag, mirrored.back().second, std::string("sets ") + key);
    }
    app.add_option("--set", sets, "key=value override, repeatable");
  }

  PipelineConfig build(PipelineConfig base = {}) const {
    if (file) base.load_file(*file);
    for (const auto& [key, value] : mirrored) {
      if (value) base.set(key, *value);
    }
    for (const auto& kv : sets) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos) throw ConfigError("--set expects key=value, got '" + kv + "'");
      base.set(kv.substr(0, eq), kv.substr(eq + 1));
    }
    base.validate();
    return base;
  }
};

struct NoiseFlags {
  std::optional<double> pixel_sigma;
  std::optional<double> canonical_sigma;
  std::optional<double> dropout;
  std::optional<std::uint64_t> seed;

  void attach(CLI::App& app) {
    app.add_option("--seed", seed, "override the scenario seed");
    app.add_option("--pixel-sigma", pixel_sigma, "keypoint pixel noise, px");
    app.add_option("--canonical-sigma", canonical_sigma, "canonical 3D keypoint noise");
    app.add_option("--dropout", dropout, "per-keypoint dropout probability");
  }

  void apply(Scenario& s) const {
    if (seed) s.seed = *seed;
    if (pixel_sigma) s.noise.pixel_sigma = *pixel_sigma;
    if (canonical_sigma) s.noise.canonical_sigma = *canonical_sigma;
    if (dropout) s.noise.dropout_prob = *dropout;
    s.validate();
  }
};

// Config an estimator needs to match a scenario's camera.
std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path + " for writing");
  return out;
}

int run_simulate(const std::string& scenario_name, const NoiseFlags& noise, const std::string& frames_out,
                 const std::optional<std::string>& truth_out, const std::optional<std::string>& config_out) {
  Scenario s = resolve_scenario(scenario_name);
  noise.apply(s);

  std::ofstream frames_file;
  std::ostream* frames = &std::cout;
  if (frames_out != "-") {
    frames_file = open_out(frames_out);
    frames = &frames_file;
  }
  std::ofstream truth_file;
  if (truth_out) {
    truth_file = open_out(*truth_out);
    truth_file << ground_truth_csv_header() << '\n';
  }
  run_scenario(s, [&](const SimulatedFrame& f) {
    *frames << serialize_frame(f.observation) << '\n';
    if (truth_out) {
      for (const auto& r : f.truth) truth_file << ground_truth_csv_row(r) << '\n';
    }
  });
  frames->flush();
  if (!*frames) throw IoError("failed writing frames");
  if (truth_out && !truth_file) throw IoError("failed writing " + *truth_out);
  if (config_out) {
    std::ofstream c = open_out(*config_out);
    c << pipeline_config_for(s).to_text();
    if (!c) throw IoError("failed writing " + *config_out);
  }
  return kOk;
}

const char* failure_name(PersonFailure f) {
  switch (f) {
    case PersonFailure::none: return "none";
    case PersonFailure::skeleton: return "skeleton";
    case PersonFailure::head: return "head";
    case PersonFailure::problem: return "problem";
    case PersonFailure::init: return "init";
    case PersonFailure::behind_camera: return "behind_camera";
    case PersonFailure::numerical: return "numerical";
  }
  return "unknown";
}

int run_estimate(const ConfigFlags& flags, const std::string& input, const std::string& output, bool with_pose,
                 bool print_stats) {
  const PipelineConfig config = flags.build();
  std::ifstream in_file;
  std::istream* in = &std::cin;
  if (input != "-") {
    in_file.open(input, std::ios::binary);
    if (!in_file) throw IoError("cannot open " + input);
    in = &in_file;
  }
  std::ofstream out_file;
  std::ostream* out = &std::cout;
  if (output != "-") {
    out_file = open_out(output);
    out = &out_file;
  }
  const EstimateSummary summary = estimate_stream(*in, *out, config, with_pose);
  if (summary.unknown_fields > 0) {
    std::cerr << "warning: ignored " << summary.unknown_fields << " unknown field(s)\n";
  }
  if (print_stats) {
    const auto& st = summary.stats;
    std::cerr << "frames: " << st.frames << "\npersons: " << st.persons << "\nconverged: " << st.converged
              << "\npnp_iterations: " << st.pnp_iterations << '\n';
    for (const auto& [f, n] : st.failures) std::cerr << "failure " << failure_name(f) << ": " << n << '\n';
  }
  return kOk;
}

int run_eval(const std::string& estimates, const std::string& truth, bool json) {
  const EvalReport rep = evaluate(read_csv_file(estimates), read_csv_file(truth));
  std::cout << (json ? rep.to_json() : rep.to_text());
  return kOk;
}

int run_bench_cmd(const std::string& scenario_name, const NoiseFlags& noise, const ConfigFlags& flags,
                  int repeats) {
  Scenario s = resolve_scenario(scenario_name);
  noise.apply(s);
  const PipelineConfig config = flags.build(pipeline_config_for(s));
  std::cout << run_bench(s, config, repeats).to_text();
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Head-pose awareness estimation for mobile robots"};
  app.require_subcommand(1);

  std::string scenario = "fig2";
  std::string frames_out = "-";
  std::optional<std::string> truth_out;
  std::optional<std::string> config_out;
  NoiseFlags sim_noise;
  auto* sim = app.add_subcommand("simulate", "scenario -> frame lines and ground truth");
  sim->add_option("--scenario", scenario, "built-in name or scenario file")->capture_default_str();
  sim->add_option("--frames-out", frames_out, "frame lines, '-' for stdout")->capture_default_str();
  sim->add_option("--ground-truth", truth_out, "ground-truth CSV path");
  sim->add_option("--config-out", config_out, "write a matching pipeline config");
  sim_noise.attach(*sim);

  ConfigFlags est_flags;
  std::string input = "-";
  std::string output = "-";
  bool with_pose = false;
  bool print_stats = false;
  auto* est = app.add_subcommand("estimate", "frame lines -> awareness CSV");
  est->add_option("--input", input, "frame lines, '-' for stdin")->capture_default_str();
  est->add_option("--output", output, "CSV, '-' for stdout")->capture_default_str();
  est->add_flag("--with-pose", with_pose, "append head->camera pose columns");
  est->add_flag("--stats", print_stats, "print estimator counters to stderr");
  est_flags.attach(*est);

  std::string estimates_path;
  std::string truth_path;
  bool json = false;
  auto* ev = app.add_subcommand("eval", "compare an awareness CSV with ground truth");
  ev->add_option("--estimates", estimates_path, "awareness CSV")->required();
  ev->add_option("--ground-truth", truth_path, "ground-truth CSV")->required();
  ev->add_flag("--json", json, "JSON report");

  std::string bench_scenario = "fig2";
  int repeats = 1;
  NoiseFlags bench_noise;
  ConfigFlags bench_flags;
  auto* bench = app.add_subcommand("bench", "throughput of parse, PnP and scoring");
  bench->add_option("--scenario", bench_scenario, "built-in name or scenario file")->capture_default_str();
  bench->add_option("--repeats", repeats, "passes over the stream")->capture_default_str();
  bench_noise.attach(*bench);
  bench_flags.attach(*bench);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  try {
    if (*sim) return run_simulate(scenario, sim_noise, frames_out, truth_out, config_out);
    if (*est) return run_estimate(est_flags, input, output, with_pose, print_stats);
    if (*ev) return run_eval(estimates_path, truth_path, json);
    if (*bench) return run_bench_cmd(bench_scenario, bench_noise, bench_flags, repeats);
  } catch (const SchemaError& e) {
    std::cerr << "schema error: " << e.what() << '\n';
    return kSchema;
  } catch (const VersionError& e) {
    std::cerr << "version error: " << e.what() << '\n';
    return kVersion;
  } catch (const AlignmentError& e) {
    std::cerr << "alignment error: " << e.what() << '\n';
    return kAlignment;
  } catch (const IoError& e) {
    std::cerr << "i/o error: " << e.what() << '\n';
    return kIo;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}
