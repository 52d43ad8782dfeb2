#pragma once

// Frame wire format: one JSON object per line.
//
//   {"schema": "gazecone.frame", "version": 1, "t": 0.0, "frame_index": 0,
//    "persons": [{"person_id": 0, "confidence": 0.92,
//                 "keypoints_2d": [[u, v, score] | null, ...],
//                 "keypoints_3d": [[x, y, z] | null, ...]}],
//    "amr": {"camera_position_m": [x, y, z], "camera_pitch_deg": p}}
//
// Keypoint arrays are indexed by KeypointId (17 body entries, optionally an
// 18th for an explicit neck). `amr` is optional. Unknown fields are skipped.

#include <string>
#include <string_view>

#include "gazecone/frame.hpp"

namespace gazecone {

inline constexpr std::string_view kFrameSchema = "gazecone.frame";
inline constexpr int kFrameVersion = 1;

struct ParseStats {
  long unknown_fields = 0;
};

// Throws SchemaError (with `line_number`) or VersionError.
FrameMessage parse_frame(std::string_view line, long line_number = 0, ParseStats* stats = nullptr);

// Single line, no trailing newline. Shortest round-trip number formatting.
std::string serialize_frame(const FrameMessage& frame);

}  // namespace gazecone
