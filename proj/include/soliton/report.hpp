#pragma once

// Run reports and grid serialization for the command-line front end.

#include <cstdio>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "soliton/bounds.hpp"
#include "soliton/profile.hpp"

namespace soliton {

/// Shortest-safe text for a double: %.17g round-trips exactly.
inline std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

struct CheckLine {
  std::string name;
  bool pass = true;
  double worst_margin = 0.0;
};

struct RunReport {
  std::string command;
  std::vector<std::pair<std::string, std::string>> parameters;
  std::vector<CheckLine> checks;
  std::vector<std::string> artifacts;

  void param(std::string key, std::string value) { parameters.emplace_back(std::move(key), std::move(value)); }
  void param(std::string key, double value) { param(std::move(key), format_double(value)); }
  void param(std::string key, int value) { param(std::move(key), std::to_string(value)); }

  void check(std::string name, bool pass, double worst_margin) {
    checks.push_back({std::move(name), pass, worst_margin});
  }

  /// Adds every entry of a bounds report.
  void add(const BoundsReport& bounds) {
    for (const auto& c : bounds.checks) {
      check(c.name, c.pass, c.worst_margin);
    }
  }

  bool all_pass() const {
    for (const auto& c : checks) {
      if (!c.pass) {
        return false;
      }
    }
    return true;
  }

  int exit_code() const { return all_pass() ? 0 : 1; }

  /// Header line, then one `PASS|FAIL name worst_margin=...` line per check.
  void print(std::ostream& os) const {
    os << command;
    for (const auto& [k, v] : parameters) {
      os << ' ' << k << '=' << v;
    }
    os << '\n';
    for (const auto& c : checks) {
      os << (c.pass ? "PASS " : "FAIL ") << c.name << " worst_margin=" << format_double(c.worst_margin) << '\n';
    }
    os << (all_pass() ? "OK" : "FAILED") << '\n';
  }

  nlohmann::ordered_json to_json() const {
    nlohmann::ordered_json j;
    j["command"] = command;
    j["parameters"] = nlohmann::ordered_json::object();
    for (const auto& [k, v] : parameters) {
      j["parameters"][k] = v;
    }
    j["checks"] = nlohmann::ordered_json::array();
    for (const auto& c : checks) {
      j["checks"].push_back({{"name", c.name}, {"pass", c.pass}, {"worst_margin", c.worst_margin}});
    }
    j["artifacts"] = artifacts;
    j["pass"] = all_pass();
    return j;
  }
};

/// `t,r,rp,rpp` header and one %.17g row per node.
inline void write_csv(std::ostream& os, const ProfileGrid& grid) {
  os << "t,r,rp,rpp\n";
  for (const auto& p : grid.nodes()) {
    os << format_double(p.t) << ',' << format_double(p.r) << ',' << format_double(p.dr) << ','
       << format_double(p.d2r) << '\n';
  }
}

inline nlohmann::ordered_json grid_to_json(const ProfileGrid& grid) {
  nlohmann::ordered_json j;
  j["n"] = grid.dimension().value();
  const auto& cfg = grid.config();
  j["config"] = {{"horizon", cfg.horizon},
                 {"step", cfg.step},
                 {"epsilon", cfg.epsilon},
                 {"launch_radius", cfg.effective_launch_radius()}};
  auto nodes = nlohmann::ordered_json::array();
  for (const auto& p : grid.nodes()) {
    nodes.push_back({p.t, p.r, p.dr, p.d2r});
  }
  j["nodes"] = std::move(nodes);
  return j;
}

inline void write_json(std::ostream& os, const ProfileGrid& grid) { os << grid_to_json(grid).dump() << '\n'; }

/// Parses the CSV written by write_csv back into rows of four values.
inline std::vector<std::vector<double>> read_csv_rows(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::vector<std::vector<double>> rows;
  std::getline(in, line);  // header
  while (std::getline(in, line)) {
    if (line.empty()) {
      continue;
    }
    std::vector<double> row;
    std::istringstream fields(line);
    std::string cell;
    while (std::getline(fields, cell, ',')) {
      row.push_back(std::stod(cell));
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace soliton
