#include "gazecone/eval.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <numbers>
#include <sstream>

#include <json.hpp>

#include "gazecone/errors.hpp"
#include "gazecone/geometry.hpp"
#include "gazecone/text.hpp"

namespace gazecone {

namespace {

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    out.push_back(line.substr(start, comma == std::string::npos ? std::string::npos : comma - start));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

double parse_number(const std::string& s) {
  if (s == "nan" || s == "-nan") return std::nan("");
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) throw SchemaError("bad CSV number '" + s + "'");
  return v;
}

long parse_long(const std::string& s) {
  long v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) throw SchemaError("bad CSV integer '" + s + "'");
  return v;
}

ErrorStats stats_of(std::vector<double> v) {
  ErrorStats s;
  s.count = static_cast<long>(v.size());
  if (v.empty()) return s;
  double sum = 0.0;
  for (double x : v) sum += x;
  s.mean = sum / static_cast<double>(v.size());
  s.max = *std::max_element(v.begin(), v.end());
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  s.median = n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
  return s;
}

struct Key {
  long frame;
  long person;
  auto operator<=>(const Key&) const = default;
};

struct PoseColumns {
  int rx = -1, ry = -1, rz = -1, tx = -1, ty = -1, tz = -1;
  bool present() const { return rx >= 0 && ry >= 0 && rz >= 0 && tx >= 0 && ty >= 0 && tz >= 0; }
};

PoseColumns pose_columns(const CsvTable& t) {
  return {t.column("rx"), t.column("ry"), t.column("rz"), t.column("tx"), t.column("ty"), t.column("tz")};
}

}  // namespace

int CsvTable::column(const std::string& name) const {
  const auto it = std::find(header.begin(), header.end(), name);
  return it == header.end() ? -1 : static_cast<int>(it - header.begin());
}

int CsvTable::require_column(const std::string& name) const {
  const int c = column(name);
  if (c < 0) throw SchemaError("CSV is missing column '" + name + "'");
  return c;
}

CsvTable read_csv(std::istream& in) {
  CsvTable table;
  std::string line;
  long number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto fields = split(line);
    if (table.header.empty()) {
      table.header = std::move(fields);
      continue;
    }
    if (fields.size() != table.header.size()) {
      throw SchemaError("CSV row has " + std::to_string(fields.size()) + " fields, header has " +
                            std::to_string(table.header.size()),
                        number);
    }
    table.rows.push_back(std::move(fields));
  }
  if (table.header.empty()) throw SchemaError("CSV has no header row");
  return table;
}

CsvTable read_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  return read_csv(in);
}

EvalReport evaluate(const CsvTable& estimates, const CsvTable& truth) {
  struct TruthRow {
    double t;
    double alpha;
    double d_fwd;
    double d_lat;
    std::string probe;
    const std::vector<std::string>* raw;
  };

  const int tf = truth.require_column("frame_index");
  const int tp = truth.require_column("person_id");
  const int tt = truth.require_column("t");
  const int ta = truth.require_column("alpha");
  const int tfwd = truth.require_column("d_fwd");
  const int tlat = truth.require_column("d_lat");
  const int tprobe = truth.column("probe");

  std::map<Key, TruthRow> truth_rows;
  for (const auto& r : truth.rows) {
    const Key k{parse_long(r[tf]), parse_long(r[tp])};
    TruthRow row{parse_number(r[tt]), parse_number(r[ta]), parse_number(r[tfwd]), parse_number(r[tlat]),
                 tprobe >= 0 ? r[tprobe] : std::string(), &r};
    if (!truth_rows.emplace(k, row).second) throw AlignmentError("ground truth repeats frame/person key");
  }

  const int ef = estimates.require_column("frame_index");
  const int ep = estimates.require_column("person_id");
  const int et = estimates.require_column("t");
  const int ea = estimates.require_column("alpha");
  const int efwd = estimates.require_column("d_fwd");
  const int elat = estimates.require_column("d_lat");
  const int econv = estimates.column("converged");

  const PoseColumns epose = pose_columns(estimates);
  const PoseColumns tpose = pose_columns(truth);
  const bool with_pose = epose.present() && tpose.present();

  EvalReport rep;
  rep.truth_rows = static_cast<long>(truth_rows.size());
  rep.estimate_rows = static_cast<long>(estimates.rows.size());

  std::map<Key, const std::vector<std::string>*> est_rows;
  for (const auto& r : estimates.rows) {
    const Key k{parse_long(r[ef]), parse_long(r[ep])};
    const auto it = truth_rows.find(k);
    if (it == truth_rows.end()) {
      throw AlignmentError("estimate for frame " + r[ef] + " person " + r[ep] + " has no ground truth");
    }
    if (std::abs(parse_number(r[et]) - it->second.t) > 1e-6) {
      throw AlignmentError("timestamp mismatch at frame " + r[ef]);
    }
    if (!est_rows.emplace(k, &r).second) {
      throw AlignmentError("estimate repeats frame " + r[ef] + " person " + r[ep]);
    }
  }

  double abs_sum = 0.0;
  std::vector<double> fwd_err, lat_err, rot_err, trans_err;
  for (const auto& [key, tr] : truth_rows) {
    const auto it = est_rows.find(key);
    double alpha_est = 0.0;
    ProbeReport probe;
    if (it == est_rows.end()) {
      ++rep.missed_rows;
    } else {
      ++rep.matched_rows;
      const auto& r = *it->second;
      alpha_est = parse_number(r[ea]);
      const double fwd = parse_number(r[efwd]);
      const double lat = parse_number(r[elat]);
      if (std::isfinite(fwd) && std::isfinite(lat)) {
        fwd_err.push_back(std::abs(fwd - tr.d_fwd));
        lat_err.push_back(std::abs(lat - tr.d_lat));
      }
      const bool converged = econv < 0 || r[econv] == "1";
      if (with_pose && converged) {
        const auto& g = *tr.raw;
        const auto vec = [](const std::vector<std::string>& row, int a, int b, int c) {
          return Vec3(parse_number(row[a]), parse_number(row[b]), parse_number(row[c]));
        };
        const Vec3 re = vec(r, epose.rx, epose.ry, epose.rz);
        const Vec3 te = vec(r, epose.tx, epose.ty, epose.tz);
        if (re.allFinite() && te.allFinite()) {
          rot_err.push_back(rotation_angle_between(rotation_to_matrix(RotationVec(re)),
                                                   rotation_to_matrix(RotationVec(vec(g, tpose.rx, tpose.ry, tpose.rz)))) *
                            180.0 / std::numbers::pi);
          trans_err.push_back((te - vec(g, tpose.tx, tpose.ty, tpose.tz)).norm());
        }
      }
      probe.estimated = true;
      probe.d_fwd_estimated = fwd;
      probe.d_lat_estimated = lat;
    }
    if (!std::isfinite(alpha_est)) alpha_est = 0.0;
    const double err = std::abs(alpha_est - tr.alpha);
    abs_sum += err;
    rep.max_alpha_error = std::max(rep.max_alpha_error, err);
    if (!tr.probe.empty()) {
      probe.name = tr.probe;
      probe.frame_index = key.frame;
      probe.alpha_true = tr.alpha;
      probe.alpha_estimated = alpha_est;
      probe.d_fwd_true = tr.d_fwd;
      probe.d_lat_true = tr.d_lat;
      rep.probes.push_back(probe);
    }
  }
  rep.mae_alpha = truth_rows.empty() ? 0.0 : abs_sum / static_cast<double>(truth_rows.size());
  rep.d_fwd_error = stats_of(std::move(fwd_err));
  rep.d_lat_error = stats_of(std::move(lat_err));
  if (with_pose) {
    rep.rotation_error_deg = stats_of(std::move(rot_err));
    rep.translation_error_m = stats_of(std::move(trans_err));
  }
  return rep;
}

std::string EvalReport::to_text() const {
  std::ostringstream out;
  const auto num = [](double d) { return format_double(d); };
  const auto stat_line = [&](const char* name, const ErrorStats& s) {
    out << name << ": n=" << s.count << " mean=" << num(s.mean) << " median=" << num(s.median)
        << " max=" << num(s.max) << "\n";
  };
  out << "truth_rows: " << truth_rows << "\n"
      << "estimate_rows: " << estimate_rows << "\n"
      << "matched_rows: " << matched_rows << "\n"
      << "missed_rows: " << missed_rows << "\n"
      << "mae_alpha: " << num(mae_alpha) << "\n"
      << "max_alpha_error: " << num(max_alpha_error) << "\n";
  stat_line("d_fwd_error_m", d_fwd_error);
  stat_line("d_lat_error_m", d_lat_error);
  if (rotation_error_deg) stat_line("rotation_error_deg", *rotation_error_deg);
  if (translation_error_m) stat_line("translation_error_m", *translation_error_m);
  for (const auto& p : probes) {
    out << "probe " << p.name << ": frame=" << p.frame_index << " alpha_true=" << num(p.alpha_true)
        << " alpha_est=" << num(p.alpha_estimated) << " d_fwd_true=" << num(p.d_fwd_true)
        << " d_fwd_est=" << num(p.d_fwd_estimated) << " d_lat_true=" << num(p.d_lat_true)
        << " d_lat_est=" << num(p.d_lat_estimated) << (p.estimated ? "" : " (missed)") << "\n";
  }
  return out.str();
}

std::string EvalReport::to_json() const {
  using nlohmann::ordered_json;
  const auto stat = [](const ErrorStats& s) {
    return ordered_json{{"count", s.count}, {"mean", s.mean}, {"median", s.median}, {"max", s.max}};
  };
  ordered_json doc;
  doc["truth_rows"] = truth_rows;
  doc["estimate_rows"] = estimate_rows;
  doc["matched_rows"] = matched_rows;
  doc["missed_rows"] = missed_rows;
  doc["mae_alpha"] = mae_alpha;
  doc["max_alpha_error"] = max_alpha_error;
  doc["d_fwd_error_m"] = stat(d_fwd_error);
  doc["d_lat_error_m"] = stat(d_lat_error);
  if (rotation_error_deg) doc["rotation_error_deg"] = stat(*rotation_error_deg);
  if (translation_error_m) doc["translation_error_m"] = stat(*translation_error_m);
  ordered_json probes_json = ordered_json::array();
  for (const auto& p : probes) {
    probes_json.push_back({{"name", p.name},
                           {"frame_index", p.frame_index},
                           {"alpha_true", p.alpha_true},
                           {"alpha_estimated", p.alpha_estimated},
                           {"d_fwd_true", p.d_fwd_true},
                           {"d_fwd_estimated", p.d_fwd_estimated},
                           {"d_lat_true", p.d_lat_true},
                           {"d_lat_estimated", p.d_lat_estimated},
                           {"estimated", p.estimated}});
  }
  doc["probes"] = probes_json;
  return doc.dump(2) + "\n";
}

}  // namespace gazecone
