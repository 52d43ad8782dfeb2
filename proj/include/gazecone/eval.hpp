#pragma once

// Comparison of an awareness CSV against simulator ground truth.

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace gazecone {

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  // Column index, or -1.
  int column(const std::string& name) const;
  int require_column(const std::string& name) const;  // throws SchemaError
};

// Plain comma-separated, no quoting. Throws SchemaError on ragged rows.
CsvTable read_csv(std::istream& in);
CsvTable read_csv_file(const std::string& path);

struct ProbeReport {
  std::string name;
  long frame_index = 0;
  double alpha_true = 0.0;
  double alpha_estimated = 0.0;
  double d_fwd_true = 0.0;
  double d_lat_true = 0.0;
  double d_fwd_estimated = 0.0;
  double d_lat_estimated = 0.0;
  bool estimated = false;
};

struct ErrorStats {
  long count = 0;
  double mean = 0.0;
  double median = 0.0;
  double max = 0.0;
};

struct EvalReport {
  long truth_rows = 0;
  long estimate_rows = 0;
  long matched_rows = 0;
  long missed_rows = 0;  // truth rows with no estimate; scored as alpha = 0
  double mae_alpha = 0.0;
  double max_alpha_error = 0.0;
  ErrorStats d_fwd_error;  // meters, rows with a finite estimate
  ErrorStats d_lat_error;
  std::optional<ErrorStats> rotation_error_deg;
  std::optional<ErrorStats> translation_error_m;
  std::vector<ProbeReport> probes;

  std::string to_text() const;
  std::string to_json() const;
};

// Throws AlignmentError when an estimate row has no matching truth row, a
// key repeats, or timestamps disagree.
EvalReport evaluate(const CsvTable& estimates, const CsvTable& truth);

}  // namespace gazecone
