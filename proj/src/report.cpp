#include "fraclab/report.hpp"

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace fraclab::report {

bool RunReport::all_passed() const {
  for (const Check& c : checks)
    if (!c.passed) return false;
  return true;
}

nlohmann::json RunReport::manifest() const {
  nlohmann::json j;
  j["command"] = command;
  j["config_hash"] = config_hash(config);
  j["config"] = config;
  j["seeds"] = seeds;
  j["wall_seconds"] = wall_seconds;
  nlohmann::json jc = nlohmann::json::array();
  for (const Check& c : checks) {
    jc.push_back({{"name", c.name},
                  {"passed", c.passed},
                  {"value", c.value},
                  {"bound", c.bound},
                  {"detail", c.detail}});
  }
  j["checks"] = jc;
  j["all_passed"] = all_passed();
  return j;
}

std::string config_hash(const nlohmann::json& config) {
  // nlohmann::json::dump() emits object keys in sorted order, so the dump is
  // canonical for equal configurations
  const std::string s = config.dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016" PRIx64, h);
  return std::string(buf);
}

std::string format_cell(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return std::string(buf);
}

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out << ',';
      out << cells[i];
    }
    out << '\n';
  };
  line(header);
  for (const auto& row : rows) {
    if (row.size() != header.size())
      throw std::invalid_argument("CSV row width does not match the header");
    line(row);
  }
}

void write_manifest(const RunReport& r, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << r.manifest().dump(2) << '\n';
}

}  // namespace fraclab::report
