#pragma once

#include "json.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace fraclab::report {

// One named check with the measured value and the bound it was held to.
struct Check {
  std::string name;
  bool passed = false;
  double value = 0.0;
  double bound = 0.0;
  std::string detail;  // human-readable comparison, e.g. "max residual <= 1e-6"
};

// Everything a run leaves behind besides its CSV tables.
struct RunReport {
  std::string command;
  nlohmann::json config;  // resolved configuration as actually run
  std::vector<std::uint64_t> seeds;
  std::vector<Check> checks;
  double wall_seconds = 0.0;

  bool all_passed() const;
  nlohmann::json manifest() const;
};

// FNV-1a hash of the canonical (sorted-key) JSON dump, as a hex string.
std::string config_hash(const nlohmann::json& config);

// CSV table with one header row; numeric cells at full double precision.
// Cells are strings so labels and numbers can mix; format_cell renders a
// double round-trippably.
std::string format_cell(double v);
void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows);

void write_manifest(const RunReport& r, const std::string& path);

}  // namespace fraclab::report
