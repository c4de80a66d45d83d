#include "serpnav/io.hpp"

#include <cstdio>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace serpnav {

void writeSweepCsv(const SweepResult& sweep, std::ostream& out) {
  out << "A,kappa,xi_x,xi_y,omega\n";
  char line[256];
  for (const SweepPoint& p : sweep.grid) {
    std::snprintf(line, sizeof(line), "%.9g,%.9g,%.9g,%.9g,%.9g\n", p.amplitude,
                  p.kappa, p.velocity.xi_x, p.velocity.xi_y, p.velocity.omega);
    out << line;
  }
}

void writeReductionMap(const ReductionMap& map, std::ostream& out) {
  char line[128];
  std::snprintf(line, sizeof(line), "v_forward: %.17g\n", map.v_forward);
  out << line;
  std::snprintf(line, sizeof(line), "omega_slope: %.17g\n", map.omega_slope);
  out << line;
  std::snprintf(line, sizeof(line), "omega_intercept: %.17g\n", map.omega_intercept);
  out << line;
  std::snprintf(line, sizeof(line), "fit_r_squared: %.17g\n", map.fit_r_squared);
  out << line;
}

void writeReductionMap(const ReductionMap& map, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write reduction map: " + path);
  writeReductionMap(map, out);
}

ReductionMap parseReductionMap(std::istream& in) {
  std::map<std::string, double> values;
  std::string line;
  while (std::getline(in, line)) {
    const size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    const size_t colon = line.find(':');
    if (colon == std::string::npos) {
      throw std::runtime_error("reduction map: expected 'key: value' lines");
    }
    std::string key = line.substr(0, colon);
    key.erase(0, key.find_first_not_of(" \t"));
    key.erase(key.find_last_not_of(" \t") + 1);
    std::istringstream value_stream(line.substr(colon + 1));
    double value = 0;
    if (!(value_stream >> value)) {
      throw std::runtime_error("reduction map: bad value for '" + key + "'");
    }
    values[key] = value;
  }
  for (const char* required :
       {"v_forward", "omega_slope", "omega_intercept", "fit_r_squared"}) {
    if (!values.count(required)) {
      throw std::runtime_error(std::string("reduction map: missing ") + required);
    }
  }
  ReductionMap map;
  map.v_forward = values["v_forward"];
  map.omega_slope = values["omega_slope"];
  map.omega_intercept = values["omega_intercept"];
  map.fit_r_squared = values["fit_r_squared"];
  if (!(map.v_forward > 0.0) || map.omega_slope == 0.0) {
    throw std::runtime_error("reduction map: invalid fitted values");
  }
  return map;
}

ReductionMap loadReductionMap(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open reduction map: " + path);
  return parseReductionMap(in);
}

}  // namespace serpnav
