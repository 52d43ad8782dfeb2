#include "gazecone/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "gazecone/errors.hpp"
#include "gazecone/text.hpp"

namespace gazecone {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

double to_double(std::string_view key, std::string_view value) {
  const std::string v = trim(value);
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size() || !std::isfinite(out)) {
    throw ConfigError("bad number for " + std::string(key) + ": '" + v + "'");
  }
  return out;
}

int to_int(std::string_view key, std::string_view value) {
  const std::string v = trim(value);
  int out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size()) {
    throw ConfigError("bad integer for " + std::string(key) + ": '" + v + "'");
  }
  return out;
}

Vec3 to_vec3(std::string_view key, std::string_view value) {
  std::string v(value);
  for (char& c : v) {
    if (c == ',') c = ' ';
  }
  std::istringstream in(v);
  std::string a, b, c, extra;
  if (!(in >> a >> b >> c) || (in >> extra)) {
    throw ConfigError(std::string(key) + " expects three numbers");
  }
  return {to_double(key, a), to_double(key, b), to_double(key, c)};
}

}  // namespace

AmrGeometry PipelineConfig::amr_geometry() const {
  return AmrGeometry::from_mount(camera_position, camera_pitch_deg * std::numbers::pi / 180.0);
}

void PipelineConfig::set(std::string_view key, std::string_view value) {
  const std::string v = trim(value);
  if (key == "camera.fx") intrinsics.fx = to_double(key, v);
  else if (key == "camera.fy") intrinsics.fy = to_double(key, v);
  else if (key == "camera.cx") intrinsics.cx = to_double(key, v);
  else if (key == "camera.cy") intrinsics.cy = to_double(key, v);
  else if (key == "camera.width") intrinsics.width = to_int(key, v);
  else if (key == "camera.height") intrinsics.height = to_int(key, v);
  else if (key == "awareness.theta_fov_deg") theta_fov_full_deg = to_double(key, v);
  else if (key == "amr.camera_position") camera_position = to_vec3(key, v);
  else if (key == "amr.camera_pitch_deg") camera_pitch_deg = to_double(key, v);
  else if (key == "pipeline.confidence_threshold") confidence_threshold = to_double(key, v);
  else if (key == "pipeline.selection") {
    if (v == "max_confidence") selection = SelectionPolicy::max_confidence;
    else if (v == "all") selection = SelectionPolicy::all;
    else throw ConfigError("pipeline.selection must be max_confidence or all");
  } else if (key == "pipeline.smoothing") {
    if (v == "off") smoothing = SmoothingMode::off;
    else if (v == "exponential") smoothing = SmoothingMode::exponential;
    else throw ConfigError("pipeline.smoothing must be off or exponential");
  } else if (key == "pipeline.smoothing_beta") smoothing_beta = to_double(key, v);
  else if (key == "pnp.max_iterations") pnp.max_iterations = to_int(key, v);
  else if (key == "pnp.residual_tolerance") pnp.residual_tolerance = to_double(key, v);
  else if (key == "pnp.step_tolerance") pnp.step_tolerance = to_double(key, v);
  else if (key == "pnp.damping_init") pnp.damping_init = to_double(key, v);
  else if (key.starts_with("anthropometric.")) {
    if (!anthropometrics.set(key, to_double(key, v))) throw ConfigError("unknown key " + std::string(key));
  } else {
    throw ConfigError("unknown key " + std::string(key));
  }
}

void PipelineConfig::load(std::istream& in) {
  std::string line;
  long number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const std::string body = trim(line);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config line " + std::to_string(number) + ": expected key = value");
    }
    try {
      set(trim(std::string_view(body).substr(0, eq)), std::string_view(body).substr(eq + 1));
    } catch (const ConfigError& e) {
      throw ConfigError("config line " + std::to_string(number) + ": " + e.what());
    }
  }
}

void PipelineConfig::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file " + path);
  load(in);
}

std::string PipelineConfig::to_text() const {
  std::ostringstream out;
  const auto num = [](double d) { return format_double(d); };
  out << "camera.fx = " << num(intrinsics.fx) << "\n"
      << "camera.fy = " << num(intrinsics.fy) << "\n"
      << "camera.cx = " << num(intrinsics.cx) << "\n"
      << "camera.cy = " << num(intrinsics.cy) << "\n"
      << "camera.width = " << intrinsics.width << "\n"
      << "camera.height = " << intrinsics.height << "\n"
      << "awareness.theta_fov_deg = " << num(theta_fov_full_deg) << "\n"
      << "amr.camera_position = " << num(camera_position.x()) << " " << num(camera_position.y()) << " "
      << num(camera_position.z()) << "\n"
      << "amr.camera_pitch_deg = " << num(camera_pitch_deg) << "\n"
      << "pipeline.confidence_threshold = " << num(confidence_threshold) << "\n"
      << "pipeline.selection = " << (selection == SelectionPolicy::all ? "all" : "max_confidence") << "\n"
      << "pipeline.smoothing = " << (smoothing == SmoothingMode::exponential ? "exponential" : "off") << "\n"
      << "pipeline.smoothing_beta = " << num(smoothing_beta) << "\n"
      << "pnp.max_iterations = " << pnp.max_iterations << "\n"
      << "pnp.residual_tolerance = " << num(pnp.residual_tolerance) << "\n"
      << "pnp.step_tolerance = " << num(pnp.step_tolerance) << "\n"
      << "pnp.damping_init = " << num(pnp.damping_init) << "\n";
  const auto& a = anthropometrics;
  out << "anthropometric.shoulder_span = " << num(a.shoulder_span) << "\n"
      << "anthropometric.ear_span = " << num(a.ear_span) << "\n"
      << "anthropometric.nose_to_neck = " << num(a.nose_to_neck) << "\n"
      << "anthropometric.upper_arm = " << num(a.upper_arm) << "\n"
      << "anthropometric.forearm = " << num(a.forearm) << "\n"
      << "anthropometric.hip_span = " << num(a.hip_span) << "\n"
      << "anthropometric.torso = " << num(a.torso) << "\n"
      << "anthropometric.thigh = " << num(a.thigh) << "\n"
      << "anthropometric.shin = " << num(a.shin) << "\n";
  return out.str();
}

void PipelineConfig::validate() const {
  try {
    intrinsics.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("camera: ") + e.what());
  }
  half_angle_from_fov(theta_fov_full_deg);
  if (!(confidence_threshold >= 0.0 && confidence_threshold <= 1.0)) {
    throw ConfigError("pipeline.confidence_threshold must be in [0, 1]");
  }
  if (!(smoothing_beta >= 0.0 && smoothing_beta < 1.0)) throw ConfigError("pipeline.smoothing_beta must be in [0, 1)");
  pnp.validate();
  anthropometrics.validate();
}

}  // namespace gazecone
