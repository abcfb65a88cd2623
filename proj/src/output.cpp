#include "expheat/output.hpp"

#include <cstdio>
#include <fstream>

#include "expheat/error.hpp"

namespace expheat {

namespace {

std::ofstream open_for_writing(const std::filesystem::path& path) {
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path());
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  return out;
}

}  // namespace

bool RunSummary::passed() const {
  for (const auto& [name, ok] : checks) {
    if (!ok) return false;
  }
  return true;
}

nlohmann::ordered_json RunSummary::to_json() const {
  nlohmann::ordered_json j;
  j["scenario"] = scenario;
  if (scenario == "experiment") j["experiment"] = experiment;
  j["outcome"] = outcome;
  j["passed"] = passed();
  auto& c = j["checks"] = nlohmann::ordered_json::object();
  for (const auto& [name, ok] : checks) c[name] = ok;
  j["metrics"] = metrics;
  auto& tol = j["tolerances"] = nlohmann::ordered_json::object();
  for (const auto& [name, v] : tolerances) tol[name] = v;
  auto& cfg = j["config"] = nlohmann::ordered_json::object();
  for (const auto& [k, v] : config) cfg[k] = v;
  j["files"] = files;
  j["wall_clock_seconds"] = wall_clock_seconds;
  return j;
}

std::string format_real(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void write_columns_csv(const std::filesystem::path& path,
                       const std::vector<std::string>& header,
                       const std::vector<std::vector<double>>& columns) {
  if (header.size() != columns.size()) {
    throw InvalidArgument("write_columns_csv: header/column count mismatch");
  }
  const std::size_t rows = columns.empty() ? 0 : columns.front().size();
  for (const auto& col : columns) {
    if (col.size() != rows) {
      throw InvalidArgument("write_columns_csv: ragged columns");
    }
  }
  auto out = open_for_writing(path);
  for (std::size_t k = 0; k < header.size(); ++k) {
    out << (k ? "," : "") << header[k];
  }
  out << '\n';
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t k = 0; k < columns.size(); ++k) {
      out << (k ? "," : "") << format_real(columns[k][i]);
    }
    out << '\n';
  }
}

void write_evolution_csv(const std::filesystem::path& path,
                         const EvolutionRecord& rec) {
  std::vector<std::vector<double>> cols(7);
  for (std::size_t k = 0; k < rec.times.size(); ++k) {
    const auto& s = rec.snapshots[k];
    cols[0].push_back(rec.times[k]);
    cols[1].push_back(s.l2);
    cols[2].push_back(s.linf);
    cols[3].push_back(s.h1_semi);
    cols[4].push_back(s.energy_j);
    cols[5].push_back(rec.dissipation_cum[k]);
    cols[6].push_back(rec.v_functional[k]);
  }
  write_columns_csv(path,
                    {"t", "l2", "linf", "h1_semi", "energy_j",
                     "dissipation_cum", "v_functional"},
                    cols);
}

void write_scan_csv(const std::filesystem::path& path, const ScanTable& table) {
  auto out = open_for_writing(path);
  out << "alpha,classification,T_or_none,y_end,ydot_end\n";
  for (const auto& row : table.rows) {
    out << format_real(row.alpha) << ','
        << (row.error.empty() ? to_string(row.classification) : "Error") << ','
        << (row.crossing_time ? format_real(*row.crossing_time) : "none") << ','
        << format_real(row.y_end) << ',' << format_real(row.ydot_end) << '\n';
  }
}

void write_profile_csv(const std::filesystem::path& path,
                       const RadialField& field) {
  const auto r = field.grid().nodes();
  const auto v = field.values();
  write_columns_csv(path, {"r", "Q"},
                    {std::vector<double>(r.begin(), r.end()),
                     std::vector<double>(v.begin(), v.end())});
}

void write_summary_json(const std::filesystem::path& path,
                        const RunSummary& summary) {
  auto out = open_for_writing(path);
  out << summary.to_json().dump(2) << '\n';
}

}  // namespace expheat
