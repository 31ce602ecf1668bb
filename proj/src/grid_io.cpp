// Copyright 2026 The nirsplan Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "nirsplan/grid_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <map>
#include <ostream>
#include <stdexcept>

namespace nirsplan {

std::string format_fixed(double value, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, value);
  std::string s(buf);
  if (s.front() == '-' && s.find_first_not_of("-0.") == std::string::npos) s.erase(0, 1);
  return s;
}

void write_grid_csv(std::ostream& out, const GridData& grid, int decimals) {
  const GridSpec& g = grid.spec;
  out << "# quantity: " << grid.quantity << "\n";
  out << "# units: " << grid.units << "\n";
  out << "# origin_x: " << format_fixed(g.origin.x, 6) << "\n";
  out << "# origin_y: " << format_fixed(g.origin.y, 6) << "\n";
  out << "# cell_size: " << format_fixed(g.cell_size_m, 6) << "\n";
  out << "# nx: " << g.nx << "\n";
  out << "# ny: " << g.ny << "\n";
  for (int iy = 0; iy < g.ny; ++iy) {
    for (int ix = 0; ix < g.nx; ++ix) {
      if (ix > 0) out << ',';
      const auto& v = grid.values[g.index(ix, iy)];
      if (v) out << format_fixed(*v, decimals);
    }
    out << '\n';
  }
}

GridData read_grid_csv(std::istream& in) {
  std::map<std::string, std::string> header;
  std::vector<std::string> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty() && line.front() == '#') {
      const auto colon = line.find(':');
      if (colon == std::string::npos) throw std::runtime_error("malformed header: " + line);
      std::string key = line.substr(1, colon - 1);
      std::string value = line.substr(colon + 1);
      auto trim = [](std::string& s) {
        s.erase(0, s.find_first_not_of(' '));
        s.erase(s.find_last_not_of(' ') + 1);
      };
      trim(key);
      trim(value);
      header[key] = value;
    } else {
      rows.push_back(line);
    }
  }
  auto field = [&](const char* key) -> const std::string& {
    auto it = header.find(key);
    if (it == header.end()) throw std::runtime_error(std::string("missing header ") + key);
    return it->second;
  };
  GridData g;
  try {
    g.quantity = field("quantity");
    g.units = field("units");
    g.spec.origin = {std::stod(field("origin_x")), std::stod(field("origin_y"))};
    g.spec.cell_size_m = std::stod(field("cell_size"));
    g.spec.nx = std::stoi(field("nx"));
    g.spec.ny = std::stoi(field("ny"));
  } catch (const std::logic_error& e) {
    throw std::runtime_error(std::string("malformed header value: ") + e.what());
  }
  if (g.spec.nx < 1 || g.spec.ny < 1 || static_cast<int>(rows.size()) != g.spec.ny) {
    throw std::runtime_error("row count does not match ny");
  }
  g.values.resize(g.spec.cell_count());
  for (int iy = 0; iy < g.spec.ny; ++iy) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    for (;;) {
      const std::size_t comma = rows[iy].find(',', start);
      fields.push_back(rows[iy].substr(start, comma - start));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    if (static_cast<int>(fields.size()) != g.spec.nx) {
      throw std::runtime_error("row " + std::to_string(iy) + " does not have nx fields");
    }
    for (int ix = 0; ix < g.spec.nx; ++ix) {
      if (fields[ix].empty()) continue;
      try {
        g.values[g.spec.index(ix, iy)] = std::stod(fields[ix]);
      } catch (const std::logic_error&) {
        throw std::runtime_error("bad number '" + fields[ix] + "'");
      }
    }
  }
  return g;
}

void write_grid_pgm(std::ostream& out, const GridData& grid, double lo, double hi) {
  if (!(hi > lo)) throw std::invalid_argument("pgm range needs hi > lo");
  const GridSpec& g = grid.spec;
  out << "P2\n# " << grid.quantity << " [" << grid.units << "] " << format_fixed(lo, 1)
      << " .. " << format_fixed(hi, 1) << "\n"
      << g.nx << ' ' << g.ny << "\n255\n";
  for (int iy = g.ny - 1; iy >= 0; --iy) {
    for (int ix = 0; ix < g.nx; ++ix) {
      const auto& v = grid.values[g.index(ix, iy)];
      long gray = 0;
      if (v) gray = std::lround(255.0 * (std::clamp(*v, lo, hi) - lo) / (hi - lo));
      out << (ix > 0 ? " " : "") << gray;
    }
    out << '\n';
  }
}

GridData path_loss_grid(const CoverageGrid& grid) {
  GridData g{grid.spec, "path_loss", "dB", {}};
  for (const auto& c : grid.cells) g.values.push_back(c.link.effective_path_loss_db);
  return g;
}

GridData enhancement_grid(const EnhancementMap& map) {
  GridData g{map.spec, "enhancement", "dB", {}};
  for (std::size_t i = 0; i < map.delta_db.size(); ++i) {
    g.values.push_back(map.in_domain[i] ? std::optional<double>(map.delta_db[i]) : std::nullopt);
  }
  return g;
}

}  // namespace nirsplan
