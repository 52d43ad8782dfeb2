#include "gazecone/frame_io.hpp"

#include <cmath>
#include <set>

#include <json.hpp>

#include "gazecone/errors.hpp"

namespace gazecone {

namespace {

using nlohmann::json;

struct LineContext {
  long line;
  ParseStats* stats;

  [[noreturn]] void fail(const std::string& what) const { throw SchemaError(what, line); }

  void count_unknown(const json& obj, std::initializer_list<std::string_view> known) const {
    if (stats == nullptr) return;
    for (const auto& item : obj.items()) {
      bool found = false;
      for (auto k : known) found = found || item.key() == k;
      if (!found) ++stats->unknown_fields;
    }
  }

  double finite(const json& v, const std::string& what) const {
    if (!v.is_number()) fail(what + " must be a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) fail(what + " must be finite");
    return d;
  }

  const json& field(const json& obj, const char* key, const std::string& where) const {
    const auto it = obj.find(key);
    if (it == obj.end()) fail(where + " is missing '" + key + "'");
    return *it;
  }
};

}  // namespace

FrameMessage parse_frame(std::string_view line, long line_number, ParseStats* stats) {
  const LineContext ctx{line_number, stats};
  json doc = json::parse(line, nullptr, false);
  if (doc.is_discarded()) ctx.fail("malformed JSON (truncated line?)");
  if (!doc.is_object()) ctx.fail("frame must be a JSON object");

  const auto schema = doc.find("schema");
  if (schema == doc.end() || !schema->is_string() || schema->get<std::string>() != kFrameSchema) {
    ctx.fail("missing or wrong 'schema' (expected \"gazecone.frame\")");
  }
  const auto version = doc.find("version");
  if (version == doc.end() || !version->is_number_integer()) ctx.fail("missing integer 'version'");
  if (version->get<long>() != kFrameVersion) {
    throw VersionError("unsupported frame version " + version->dump(), line_number);
  }
  ctx.count_unknown(doc, {"schema", "version", "t", "frame_index", "persons", "amr"});

  FrameMessage msg;
  msg.t = ctx.finite(ctx.field(doc, "t", "frame"), "'t'");
  const json& fi = ctx.field(doc, "frame_index", "frame");
  if (!fi.is_number_integer()) ctx.fail("'frame_index' must be an integer");
  msg.frame_index = fi.get<long>();

  const json& persons = ctx.field(doc, "persons", "frame");
  if (!persons.is_array()) ctx.fail("'persons' must be an array");
  std::set<int> seen;
  for (const json& p : persons) {
    if (!p.is_object()) ctx.fail("person entries must be objects");
    ctx.count_unknown(p, {"person_id", "confidence", "keypoints_2d", "keypoints_3d"});
    PersonDetection det;
    const json& pid = ctx.field(p, "person_id", "person");
    if (!pid.is_number_integer()) ctx.fail("'person_id' must be an integer");
    det.person_id = pid.get<int>();
    if (!seen.insert(det.person_id).second) {
      ctx.fail("duplicate person_id " + std::to_string(det.person_id));
    }
    const std::string who = "person " + std::to_string(det.person_id);
    det.confidence = ctx.finite(ctx.field(p, "confidence", who), who + " confidence");
    if (det.confidence < 0.0 || det.confidence > 1.0) ctx.fail(who + " confidence must be in [0, 1]");

    const json& k2 = ctx.field(p, "keypoints_2d", who);
    const json& k3 = ctx.field(p, "keypoints_3d", who);
    for (const json* arr : {&k2, &k3}) {
      if (!arr->is_array() || (arr->size() != kBodyKeypointCount && arr->size() != kKeypointCount)) {
        ctx.fail(who + " keypoint arrays must have 17 or 18 entries");
      }
    }
    for (std::size_t i = 0; i < k2.size(); ++i) {
      const json& e = k2[i];
      if (e.is_null()) continue;
      if (!e.is_array() || e.size() != 3) ctx.fail(who + " keypoints_2d entries must be [u, v, score] or null");
      const auto id = static_cast<KeypointId>(i);
      const std::string name = who + " " + std::string(keypoint_name(id));
      const double score = ctx.finite(e[2], name + " score");
      if (score < 0.0 || score > 1.0) ctx.fail(name + " score must be in [0, 1]");
      det.keypoints_2d.set(id, {{ctx.finite(e[0], name + " u"), ctx.finite(e[1], name + " v")}, score});
    }
    for (std::size_t i = 0; i < k3.size(); ++i) {
      const json& e = k3[i];
      if (e.is_null()) continue;
      if (!e.is_array() || e.size() != 3) ctx.fail(who + " keypoints_3d entries must be [x, y, z] or null");
      const auto id = static_cast<KeypointId>(i);
      const std::string name = who + " " + std::string(keypoint_name(id));
      det.keypoints_3d.set(id, {ctx.finite(e[0], name + " x"), ctx.finite(e[1], name + " y"),
                                ctx.finite(e[2], name + " z")});
    }
    msg.persons.push_back(std::move(det));
  }

  if (const auto amr = doc.find("amr"); amr != doc.end() && !amr->is_null()) {
    if (!amr->is_object()) ctx.fail("'amr' must be an object");
    ctx.count_unknown(*amr, {"camera_position_m", "camera_pitch_deg"});
    AmrMountOverride o;
    const json& pos = ctx.field(*amr, "camera_position_m", "amr");
    if (!pos.is_array() || pos.size() != 3) ctx.fail("'amr.camera_position_m' must be [x, y, z]");
    o.camera_position = {ctx.finite(pos[0], "amr x"), ctx.finite(pos[1], "amr y"), ctx.finite(pos[2], "amr z")};
    if (const auto pitch = amr->find("camera_pitch_deg"); pitch != amr->end()) {
      o.camera_pitch_deg = ctx.finite(*pitch, "amr.camera_pitch_deg");
    }
    msg.amr = o;
  }
  return msg;
}

std::string serialize_frame(const FrameMessage& frame) {
  // ordered_json keeps the documented field order in the output.
  using ojson = nlohmann::ordered_json;
  ojson persons = ojson::array();
  for (const auto& p : frame.persons) {
    ojson k2 = ojson::array();
    ojson k3 = ojson::array();
    for (std::size_t i = 0; i < kKeypointCount; ++i) {
      const auto id = static_cast<KeypointId>(i);
      if (const auto& kp = p.keypoints_2d.get(id)) {
        k2.push_back(ojson::array({kp->pixel.u, kp->pixel.v, kp->confidence}));
      } else {
        k2.push_back(nullptr);
      }
      if (const auto& v = p.keypoints_3d.get(id)) {
        k3.push_back(ojson::array({v->x(), v->y(), v->z()}));
      } else {
        k3.push_back(nullptr);
      }
    }
    ojson person;
    person["person_id"] = p.person_id;
    person["confidence"] = p.confidence;
    person["keypoints_2d"] = std::move(k2);
    person["keypoints_3d"] = std::move(k3);
    persons.push_back(std::move(person));
  }
  ojson doc;
  doc["schema"] = kFrameSchema;
  doc["version"] = kFrameVersion;
  doc["t"] = frame.t;
  doc["frame_index"] = frame.frame_index;
  doc["persons"] = std::move(persons);
  if (frame.amr) {
    const auto& a = *frame.amr;
    ojson amr;
    amr["camera_position_m"] = ojson::array({a.camera_position.x(), a.camera_position.y(), a.camera_position.z()});
    amr["camera_pitch_deg"] = a.camera_pitch_deg;
    doc["amr"] = std::move(amr);
  }
  return doc.dump();
}

}  // namespace gazecone
