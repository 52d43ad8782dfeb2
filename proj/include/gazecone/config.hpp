#pragma once

// Pipeline configuration. Layered: built-in defaults, then an optional
// `key = value` file, then command-line overrides. Every key accepted by the
// file is listed in data/pipeline_defaults.cfg.

#include <istream>
#include <string>
#include <string_view>

#include "gazecone/awareness.hpp"
#include "gazecone/geometry.hpp"
#include "gazecone/pnp.hpp"
#include "gazecone/skeleton.hpp"

namespace gazecone {

enum class SelectionPolicy { max_confidence, all };
enum class SmoothingMode { off, exponential };

struct PipelineConfig {
  CameraIntrinsics intrinsics;
  double theta_fov_full_deg = kDefaultFullFovDeg;
  Vec3 camera_position = Vec3::Zero();  // camera in the robot reference frame
  double camera_pitch_deg = 0.0;
  double confidence_threshold = 0.3;
  SelectionPolicy selection = SelectionPolicy::max_confidence;
  SmoothingMode smoothing = SmoothingMode::off;
  double smoothing_beta = 0.5;
  PnPConfig pnp;
  AnthropometricTable anthropometrics;

  AmrGeometry amr_geometry() const;
  double half_angle() const { return half_angle_from_fov(theta_fov_full_deg); }

  // Applies one key. Throws ConfigError for unknown keys or bad values.
  void set(std::string_view key, std::string_view value);
  // Reads `key = value` lines; '#' starts a comment.
  void load(std::istream& in);
  void load_file(const std::string& path);
  // Every key in load() syntax.
  std::string to_text() const;

  void validate() const;
};

}  // namespace gazecone
