#include "frob/report.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

#include <nlohmann/json.hpp>

namespace frob {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

int ReportDocument::failures() const {
  int n = 0;
  for (const auto& r : rows)
    if (r.asserted && !r.passed) ++n;
  return n;
}

std::string ReportDocument::to_csv() const {
  std::ostringstream os;
  os << "manifold,seed,sample,identity,anchor,pattern,residual,scale,tolerance,"
        "asserted,passed\n";
  for (const auto& r : rows) {
    os << config.manifold << ',' << config.seed << ',' << r.sample << ',' << r.id
       << ',' << r.anchor << ',' << r.pattern << ',' << format_double(r.residual)
       << ',' << format_double(r.scale) << ',' << format_double(r.tolerance) << ','
       << (r.asserted ? 1 : 0) << ',' << (r.passed ? 1 : 0) << '\n';
  }
  return os.str();
}

std::string ReportDocument::to_json() const {
  nlohmann::ordered_json doc;
  doc["schema_version"] = kReportSchemaVersion;
  doc["command"] = command;
  doc["config"] = {{"manifold", config.manifold},
                   {"seed", config.seed},
                   {"num_points", config.num_points},
                   {"box", config.box},
                   {"jets", config.jets},
                   {"precision", config.precision}};
  nlohmann::ordered_json rows_json = nlohmann::ordered_json::array();
  for (const auto& r : rows) {
    rows_json.push_back({{"sample", r.sample},
                         {"identity", r.id},
                         {"anchor", r.anchor},
                         {"pattern", r.pattern},
                         {"residual", r.residual},
                         {"scale", r.scale},
                         {"tolerance", r.tolerance},
                         {"asserted", r.asserted},
                         {"passed", r.passed}});
  }
  doc["rows"] = std::move(rows_json);
  nlohmann::ordered_json ex;
  for (const auto& [k, v] : extra) ex[k] = v;
  doc["summary"] = std::move(ex);
  doc["failures"] = failures();
  return doc.dump(2) + "\n";
}

std::string ReportDocument::render(const std::string& format) const {
  return format == "json" ? to_json() : to_csv();
}

std::string ReportDocument::summary_lines() const {
  struct Agg {
    double worst = 0;
    double tol = 0;
    bool asserted = false;
    bool passed = true;
  };
  std::vector<std::pair<std::string, Agg>> order;
  auto find = [&](const std::string& id) -> Agg& {
    for (auto& [k, v] : order)
      if (k == id) return v;
    order.push_back({id, {}});
    return order.back().second;
  };
  for (const auto& r : rows) {
    Agg& a = find(r.id);
    a.worst = std::max(a.worst, r.residual / std::max(r.scale, 1.0));
    a.tol = r.tolerance;
    a.asserted = a.asserted || r.asserted;
    a.passed = a.passed && (r.passed || !r.asserted);
  }
  std::ostringstream os;
  for (const auto& [id, a] : order) {
    os << (a.asserted ? (a.passed ? "[PASS] " : "[FAIL] ") : "[info] ") << id
       << "  worst-rel-residual " << format_double(a.worst) << "  tol "
       << format_double(a.tol) << '\n';
  }
  for (const auto& [k, v] : extra) os << k << ": " << v << '\n';
  return os.str();
}

}  // namespace frob
