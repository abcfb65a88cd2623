#pragma once

// CSV tables and the JSON run summary. Reals are written with %.17g so
// identical runs give byte-identical files.

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "expheat/heat_solver.hpp"
#include "expheat/radial.hpp"
#include "expheat/shooting.hpp"

namespace expheat {

struct RunSummary {
  std::string scenario;
  std::string experiment;
  std::string outcome;
  // Asserted checks; the run passes when all are true.
  std::vector<std::pair<std::string, bool>> checks;
  nlohmann::ordered_json metrics = nlohmann::ordered_json::object();
  std::vector<std::pair<std::string, std::string>> config;
  std::vector<std::pair<std::string, double>> tolerances;
  std::vector<std::string> files;
  double wall_clock_seconds = 0.0;

  void check(const std::string& name, bool value) {
    checks.emplace_back(name, value);
  }
  bool passed() const;
  nlohmann::ordered_json to_json() const;
};

std::string format_real(double x);

/// Header plus equally long columns.
void write_columns_csv(const std::filesystem::path& path,
                       const std::vector<std::string>& header,
                       const std::vector<std::vector<double>>& columns);

/// t, l2, linf, h1_semi, energy_j, dissipation_cum, v_functional.
void write_evolution_csv(const std::filesystem::path& path,
                         const EvolutionRecord& rec);

/// alpha, classification, T_or_none, y_end, ydot_end.
void write_scan_csv(const std::filesystem::path& path, const ScanTable& table);

/// r, Q.
void write_profile_csv(const std::filesystem::path& path,
                       const RadialField& field);

void write_summary_json(const std::filesystem::path& path,
                        const RunSummary& summary);

}  // namespace expheat
