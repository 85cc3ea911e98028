#include "report.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

namespace lift::cli {
namespace {

std::string scientific(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

std::string point_text(const std::vector<double>& v) {
  std::string s = "(";
  for (std::size_t i = 0; i < v.size(); ++i) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%s%.4f", i ? ", " : "", v[i]);
    s += buf;
  }
  return s + ")";
}

}  // namespace

nlohmann::json to_json(const PropertyReport& report) {
  nlohmann::json results = nlohmann::json::array();
  for (const auto& r : report.results) {
    results.push_back({
        {"manifold", r.manifold},
        {"property", r.property},
        {"anchor", r.anchor},
        {"bound", r.bound == Bound::AtMost ? "at_most" : "at_least"},
        {"threshold", r.threshold},
        {"max_residual", r.max_residual},
        {"argmax_point", r.argmax_point},
        {"pass", r.pass},
    });
  }
  return {
      {"meta",
       {{"seed", report.config.seed},
        {"samples", report.config.samples},
        {"tol", report.config.tolerance},
        {"version", kVersion}}},
      {"results", std::move(results)},
      {"pass", report.pass()},
  };
}

std::string render_json(const PropertyReport& report) { return to_json(report).dump(2) + "\n"; }

std::string render_text(const PropertyReport& report) {
  struct Row {
    std::string manifold, property, residual, bound, point, status;
  };
  std::vector<Row> rows;
  rows.push_back({"manifold", "property", "max_residual", "threshold", "argmax (x, p)", "status"});
  for (const auto& r : report.results) {
    rows.push_back({r.manifold, r.property, scientific(r.max_residual),
                    (r.bound == Bound::AtMost ? "<= " : ">= ") + scientific(r.threshold), point_text(r.argmax_point),
                    r.pass ? "pass" : "FAIL"});
  }
  std::size_t w[5] = {0, 0, 0, 0, 0};
  for (const auto& row : rows) {
    w[0] = std::max(w[0], row.manifold.size());
    w[1] = std::max(w[1], row.property.size());
    w[2] = std::max(w[2], row.residual.size());
    w[3] = std::max(w[3], row.bound.size());
    w[4] = std::max(w[4], row.point.size());
  }
  std::ostringstream os;
  auto cell = [&](const std::string& s, std::size_t width) { os << s << std::string(width - s.size() + 2, ' '); };
  for (const auto& row : rows) {
    cell(row.manifold, w[0]);
    cell(row.property, w[1]);
    cell(row.residual, w[2]);
    cell(row.bound, w[3]);
    cell(row.point, w[4]);
    os << row.status << '\n';
  }
  const auto failed = std::count_if(report.results.begin(), report.results.end(),
                                    [](const PropertyResult& r) { return !r.pass; });
  os << '\n'
     << report.results.size() << " checks, " << failed << " failed (seed " << report.config.seed << ", "
     << report.config.samples << " samples, tol " << scientific(report.config.tolerance) << ")\n";
  return os.str();
}

}  // namespace lift::cli
