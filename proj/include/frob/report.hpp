#pragma once

// Machine-readable run reports: CSV rows and a JSON document with a fixed
// schema version. Byte output is deterministic for a fixed (config, seed).

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace frob {

inline constexpr int kReportSchemaVersion = 1;

struct IdentityRow {
  int sample = -1;               // -1: not tied to one sample point
  std::string id;                // machine name, e.g. "string-equation"
  std::string anchor;            // equation tag in the source text
  std::string pattern;           // index pattern, e.g. "i=1,j=2"
  double residual = 0.0;
  double scale = 1.0;            // max summand magnitude (cancellation scale)
  double tolerance = 0.0;
  bool asserted = true;          // informational rows never fail a run
  bool passed = true;
};

struct RunConfig {
  std::string manifold = "A2";
  uint64_t seed = 1;
  int num_points = 10;
  double box = 0.2;
  std::string jets = "seeded";           // "seeded" or explicit list
  std::string output;                    // empty: stdout only
  std::string format = "csv";            // "csv" | "json"
  std::string precision = "double";      // "double" | "dd"
  int threads = 0;                       // 0: hardware default
  std::vector<std::string> only;         // identity-id filter
  std::map<std::string, double> tol_override;
};

struct ReportDocument {
  std::string command;
  RunConfig config;
  std::vector<IdentityRow> rows;
  std::map<std::string, std::string> extra;  // summary key/values

  int failures() const;
  std::string to_csv() const;
  std::string to_json() const;
  std::string render(const std::string& format) const;
  // stdout summary: one line per identity id with worst residual
  std::string summary_lines() const;
};

std::string format_double(double v);

}  // namespace frob
