#include "gazecone/scenario.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>

#include <json.hpp>

#include "builtin_scenarios.hpp"
#include "gazecone/errors.hpp"

namespace gazecone {

namespace {

using nlohmann::json;

constexpr double kDeg = std::numbers::pi / 180.0;

double lerp(double a, double b, double s) { return a + (b - a) * s; }

const json& require(const json& obj, const char* key, const std::string& where) {
  if (!obj.is_object() || !obj.contains(key)) {
    throw SchemaError(where + ": missing field '" + key + "'");
  }
  return obj.at(key);
}

double number(const json& obj, const char* key, const std::string& where) {
  const json& v = require(obj, key, where);
  if (!v.is_number()) throw SchemaError(where + ": field '" + std::string(key) + "' must be a number");
  return v.get<double>();
}

double number_or(const json& obj, const char* key, double fallback, const std::string& where) {
  if (!obj.contains(key)) return fallback;
  return number(obj, key, where);
}

Vec3 vec3(const json& obj, const char* key, const std::string& where) {
  const json& v = require(obj, key, where);
  if (!v.is_array() || v.size() != 3 || !v[0].is_number() || !v[1].is_number() || !v[2].is_number()) {
    throw SchemaError(where + ": field '" + std::string(key) + "' must be [x, y, z]");
  }
  return {v[0].get<double>(), v[1].get<double>(), v[2].get<double>()};
}

TrajectorySpec parse_track(const json& obj, const std::string& where) {
  const json& wps = require(obj, "waypoints", where);
  if (!wps.is_array() || wps.empty()) throw SchemaError(where + ": waypoints must be a non-empty array");
  TrajectorySpec track;
  for (std::size_t i = 0; i < wps.size(); ++i) {
    const std::string w = where + ".waypoints[" + std::to_string(i) + "]";
    track.waypoints.push_back(
        {number(wps[i], "t_s", w), vec3(wps[i], "position_m", w), number(wps[i], "heading_deg", w) * kDeg});
  }
  return track;
}

HeadYawProfile parse_yaw(const json& obj, const std::string& where) {
  HeadYawProfile p;
  const json& type = require(obj, "type", where);
  if (type == "sinusoid") {
    p.kind = HeadYawProfile::Kind::sinusoid;
    p.amplitude = number(obj, "amplitude_deg", where) * kDeg;
    p.period = number(obj, "period_s", where);
    p.phase = number_or(obj, "phase_deg", 0.0, where) * kDeg;
  } else if (type == "keyframes") {
    p.kind = HeadYawProfile::Kind::keyframes;
    const json& kfs = require(obj, "keyframes", where);
    if (!kfs.is_array() || kfs.empty()) throw SchemaError(where + ": keyframes must be a non-empty array");
    for (std::size_t i = 0; i < kfs.size(); ++i) {
      const std::string w = where + ".keyframes[" + std::to_string(i) + "]";
      p.keyframes.push_back({number(kfs[i], "t_s", w), number(kfs[i], "yaw_deg", w) * kDeg});
    }
  } else {
    throw SchemaError(where + ": type must be 'sinusoid' or 'keyframes'");
  }
  return p;
}

json track_json(const TrajectorySpec& t) {
  json wps = json::array();
  for (const auto& w : t.waypoints) {
    wps.push_back({{"t_s", w.t},
                   {"position_m", {w.position.x(), w.position.y(), w.position.z()}},
                   {"heading_deg", w.heading / kDeg}});
  }
  return {{"waypoints", wps}};
}

void check_times(const std::vector<double>& times, double duration, const std::string& where, bool span) {
  for (std::size_t i = 1; i < times.size(); ++i) {
    if (!(times[i] > times[i - 1])) throw SchemaError(where + ": times must be strictly increasing");
  }
  if (span && (times.front() > 0.0 || times.back() < duration)) {
    throw SchemaError(where + ": waypoints must span [0, duration]");
  }
}

}  // namespace

PlanarPose TrajectorySpec::at(double t) const {
  const auto& w = waypoints;
  if (t <= w.front().t) return {w.front().position, w.front().heading};
  if (t >= w.back().t) return {w.back().position, w.back().heading};
  const auto hi = std::upper_bound(w.begin(), w.end(), t,
                                   [](double value, const Waypoint& p) { return value < p.t; });
  const auto lo = hi - 1;
  const double s = (t - lo->t) / (hi->t - lo->t);
  return {lo->position + (hi->position - lo->position) * s, lerp(lo->heading, hi->heading, s)};
}

double HeadYawProfile::at(double t) const {
  if (kind == Kind::sinusoid) {
    return amplitude * std::sin(2.0 * std::numbers::pi * t / period + phase);
  }
  const auto& k = keyframes;
  if (t <= k.front().t) return k.front().yaw;
  if (t >= k.back().t) return k.back().yaw;
  const auto hi = std::upper_bound(k.begin(), k.end(), t,
                                   [](double value, const Keyframe& f) { return value < f.t; });
  const auto lo = hi - 1;
  return lerp(lo->yaw, hi->yaw, (t - lo->t) / (hi->t - lo->t));
}

long Scenario::frame_count() const { return std::lround(duration * fps); }

double Scenario::time_of(long frame_index) const { return static_cast<double>(frame_index) / fps; }

long Scenario::frame_at(double t) const {
  return std::clamp(std::lround(t * fps), 0L, std::max(0L, frame_count() - 1));
}

AmrGeometry Scenario::estimator_geometry() const {
  return AmrGeometry::from_mount(camera_mount.position - amr_reference, camera_mount.pitch);
}

RigidTransform Scenario::amr_to_camera() const {
  return transform_invert(
      RigidTransform::from_matrix(optical_to_robot_rotation(camera_mount.pitch), camera_mount.position));
}

void Scenario::validate() const {
  if (!(duration > 0.0) || !std::isfinite(duration)) throw SchemaError("duration_s must be > 0");
  if (!(fps > 0.0) || !std::isfinite(fps)) throw SchemaError("fps must be > 0");
  try {
    intrinsics.validate();
  } catch (const std::invalid_argument& e) {
    throw SchemaError(std::string("camera: ") + e.what());
  }
  if (!(theta_fov_deg > 0.0 && theta_fov_deg < 180.0)) throw SchemaError("theta_fov_deg must be in (0, 180)");
  if (noise.pixel_sigma < 0.0 || noise.canonical_sigma < 0.0) throw SchemaError("noise sigmas must be >= 0");
  if (!(noise.dropout_prob >= 0.0 && noise.dropout_prob <= 1.0)) throw SchemaError("dropout_prob must be in [0, 1]");

  const auto times_of = [](const TrajectorySpec& t) {
    std::vector<double> out;
    for (const auto& w : t.waypoints) out.push_back(w.t);
    return out;
  };
  if (amr_track.waypoints.empty()) throw SchemaError("amr_track needs waypoints");
  check_times(times_of(amr_track), duration, "amr_track", true);
  if (humans.empty()) throw SchemaError("scenario needs at least one human");
  std::vector<int> ids;
  for (const auto& h : humans) {
    const std::string where = "human " + std::to_string(h.person_id);
    if (h.track.waypoints.empty()) throw SchemaError(where + ": track needs waypoints");
    check_times(times_of(h.track), duration, where + " track", true);
    if (!(h.confidence >= 0.0 && h.confidence <= 1.0)) throw SchemaError(where + ": confidence must be in [0, 1]");
    if (h.head_yaw.kind == HeadYawProfile::Kind::sinusoid) {
      if (!(std::abs(h.head_yaw.amplitude) < std::numbers::pi)) throw SchemaError(where + ": yaw amplitude must be < 180 deg");
      if (!(h.head_yaw.period > 0.0)) throw SchemaError(where + ": yaw period must be > 0");
    } else {
      std::vector<double> kt;
      for (const auto& k : h.head_yaw.keyframes) {
        kt.push_back(k.t);
        if (!(std::abs(k.yaw) < std::numbers::pi)) throw SchemaError(where + ": yaw keyframes must be within +-180 deg");
      }
      if (kt.empty()) throw SchemaError(where + ": yaw keyframes missing");
      check_times(kt, duration, where + " head_yaw", false);
    }
    ids.push_back(h.person_id);
  }
  std::sort(ids.begin(), ids.end());
  if (std::adjacent_find(ids.begin(), ids.end()) != ids.end()) throw SchemaError("person_id values must be unique");
}

Scenario parse_scenario(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw SchemaError(std::string("scenario is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw SchemaError("scenario must be a JSON object");
  if (!doc.contains("format") || doc["format"] != kScenarioFormat) {
    throw SchemaError("scenario header must have format \"gazecone-scenario\"");
  }
  if (!doc.contains("version") || !doc["version"].is_number_integer()) {
    throw SchemaError("scenario header must have an integer version");
  }
  if (doc["version"].get<int>() != kScenarioVersion) {
    throw VersionError("unsupported scenario version " + doc["version"].dump());
  }

  try {
    Scenario s;
    s.name = doc.value("name", std::string("unnamed"));
    s.duration = number(doc, "duration_s", "scenario");
    s.fps = number(doc, "fps", "scenario");
    s.seed = doc.contains("seed") ? doc["seed"].get<std::uint64_t>() : 0;
    const json& cam = require(doc, "camera", "scenario");
    s.intrinsics.fx = number(cam, "fx_px", "camera");
    s.intrinsics.fy = number(cam, "fy_px", "camera");
    s.intrinsics.cx = number(cam, "cx_px", "camera");
    s.intrinsics.cy = number(cam, "cy_px", "camera");
    s.intrinsics.width = static_cast<int>(number(cam, "width_px", "camera"));
    s.intrinsics.height = static_cast<int>(number(cam, "height_px", "camera"));
    const json& mount = require(doc, "camera_mount", "scenario");
    s.camera_mount.position = vec3(mount, "position_m", "camera_mount");
    s.camera_mount.pitch = number_or(mount, "pitch_deg", 0.0, "camera_mount") * kDeg;
    s.amr_reference = doc.contains("amr_reference_m") ? vec3(doc, "amr_reference_m", "scenario")
                                                      : s.camera_mount.position;
    s.theta_fov_deg = number_or(doc, "theta_fov_deg", kDefaultFullFovDeg, "scenario");
    if (doc.contains("noise")) {
      const json& n = doc["noise"];
      s.noise.pixel_sigma = number_or(n, "pixel_sigma_px", 0.0, "noise");
      s.noise.canonical_sigma = number_or(n, "canonical_sigma", 0.0, "noise");
      s.noise.dropout_prob = number_or(n, "dropout_prob", 0.0, "noise");
    }
    s.amr_track = parse_track(require(doc, "amr_track", "scenario"), "amr_track");
    const json& humans = require(doc, "humans", "scenario");
    if (!humans.is_array()) throw SchemaError("humans must be an array");
    for (std::size_t i = 0; i < humans.size(); ++i) {
      const std::string where = "humans[" + std::to_string(i) + "]";
      HumanSpec h;
      h.person_id = static_cast<int>(number(humans[i], "person_id", where));
      h.confidence = number_or(humans[i], "confidence", 0.9, where);
      h.track = parse_track(require(humans[i], "track", where), where + ".track");
      h.head_yaw = parse_yaw(require(humans[i], "head_yaw", where), where + ".head_yaw");
      s.humans.push_back(std::move(h));
    }
    if (doc.contains("probes")) {
      for (const auto& p : doc["probes"]) {
        Probe probe;
        probe.name = require(p, "name", "probe").get<std::string>();
        probe.t = number(p, "t_s", "probe " + probe.name);
        if (p.contains("target_alpha")) {
          probe.has_targets = true;
          probe.target_alpha = number(p, "target_alpha", "probe");
          probe.target_d_fwd = number(p, "target_d_fwd_m", "probe");
          probe.target_d_lat = number(p, "target_d_lat_m", "probe");
        }
        for (char c : probe.name) {
          if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_')) {
            throw SchemaError("probe names may only contain letters, digits and '_'");
          }
        }
        s.probes.push_back(std::move(probe));
      }
    }
    s.validate();
    return s;
  } catch (const json::exception& e) {
    throw SchemaError(std::string("scenario field has the wrong type: ") + e.what());
  }
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open scenario file " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str());
}

std::string serialize_scenario(const Scenario& s) {
  json doc;
  doc["format"] = kScenarioFormat;
  doc["version"] = kScenarioVersion;
  doc["name"] = s.name;
  doc["duration_s"] = s.duration;
  doc["fps"] = s.fps;
  doc["seed"] = s.seed;
  doc["camera"] = {{"fx_px", s.intrinsics.fx},       {"fy_px", s.intrinsics.fy},
                   {"cx_px", s.intrinsics.cx},       {"cy_px", s.intrinsics.cy},
                   {"width_px", s.intrinsics.width}, {"height_px", s.intrinsics.height}};
  const auto& m = s.camera_mount;
  doc["camera_mount"] = {{"position_m", {m.position.x(), m.position.y(), m.position.z()}},
                         {"pitch_deg", m.pitch / kDeg}};
  doc["amr_reference_m"] = {s.amr_reference.x(), s.amr_reference.y(), s.amr_reference.z()};
  doc["theta_fov_deg"] = s.theta_fov_deg;
  doc["noise"] = {{"pixel_sigma_px", s.noise.pixel_sigma},
                  {"canonical_sigma", s.noise.canonical_sigma},
                  {"dropout_prob", s.noise.dropout_prob}};
  doc["amr_track"] = track_json(s.amr_track);
  json humans = json::array();
  for (const auto& h : s.humans) {
    json yaw;
    if (h.head_yaw.kind == HeadYawProfile::Kind::sinusoid) {
      yaw = {{"type", "sinusoid"},
             {"amplitude_deg", h.head_yaw.amplitude / kDeg},
             {"period_s", h.head_yaw.period},
             {"phase_deg", h.head_yaw.phase / kDeg}};
    } else {
      json kfs = json::array();
      for (const auto& k : h.head_yaw.keyframes) kfs.push_back({{"t_s", k.t}, {"yaw_deg", k.yaw / kDeg}});
      yaw = {{"type", "keyframes"}, {"keyframes", kfs}};
    }
    humans.push_back({{"person_id", h.person_id},
                      {"confidence", h.confidence},
                      {"track", track_json(h.track)},
                      {"head_yaw", yaw}});
  }
  doc["humans"] = humans;
  json probes = json::array();
  for (const auto& p : s.probes) {
    json jp = {{"name", p.name}, {"t_s", p.t}};
    if (p.has_targets) {
      jp["target_alpha"] = p.target_alpha;
      jp["target_d_fwd_m"] = p.target_d_fwd;
      jp["target_d_lat_m"] = p.target_d_lat;
    }
    probes.push_back(jp);
  }
  doc["probes"] = probes;
  return doc.dump(2) + "\n";
}

std::vector<std::string> builtin_scenario_names() {
  std::vector<std::string> names;
  for (const auto& b : builtin::kScenarios) names.emplace_back(b.name);
  return names;
}

Scenario resolve_scenario(const std::string& name_or_path) {
  for (const auto& b : builtin::kScenarios) {
    if (b.name == name_or_path) return parse_scenario(b.json);
  }
  return load_scenario(name_or_path);
}

}  // namespace gazecone
