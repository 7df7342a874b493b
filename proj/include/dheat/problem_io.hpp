#pragma once

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "dheat/grid.hpp"

namespace dheat {

struct ProblemDescription {
  GridSpec grid;
  DirichletSpec dirichlet;
};

/// Plain-text problem format: `key=value` lines for nx, ny, edge_x0,
/// edge_x1, edge_y0, edge_y1, plus one `pin x y value` line per pinned
/// cell. Blank lines and lines starting with '#' are ignored.
inline ProblemDescription load_problem(std::istream& in) {
  ProblemDescription desc;
  std::string line;
  int line_no = 0;
  auto fail = [&](const std::string& what) {
    throw std::runtime_error("problem file line " + std::to_string(line_no) +
                             ": " + what);
  };

  while (std::getline(in, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    const auto last = line.find_last_not_of(" \t\r");
    const std::string body = line.substr(first, last - first + 1);

    if (body.rfind("pin", 0) == 0 &&
        (body.size() == 3 || body[3] == ' ' || body[3] == '\t')) {
      std::istringstream fields(body.substr(3));
      PinnedCell pin;
      if (!(fields >> pin.x >> pin.y >> pin.value)) {
        fail("expected 'pin x y value'");
      }
      desc.dirichlet.pins.push_back(pin);
      continue;
    }

    const auto eq = body.find('=');
    if (eq == std::string::npos) fail("expected 'key=value' or 'pin x y value'");
    const std::string key = body.substr(0, eq);
    const std::string value = body.substr(eq + 1);
    try {
      if (key == "nx") {
        desc.grid.nx = std::stoi(value);
      } else if (key == "ny") {
        desc.grid.ny = std::stoi(value);
      } else if (key == "edge_x0") {
        desc.dirichlet.edge_x0 = std::stod(value);
      } else if (key == "edge_x1") {
        desc.dirichlet.edge_x1 = std::stod(value);
      } else if (key == "edge_y0") {
        desc.dirichlet.edge_y0 = std::stod(value);
      } else if (key == "edge_y1") {
        desc.dirichlet.edge_y1 = std::stod(value);
      } else {
        fail("unknown key '" + key + "'");
      }
    } catch (const std::invalid_argument&) {
      fail("bad numeric value '" + value + "'");
    } catch (const std::out_of_range&) {
      fail("numeric value out of range '" + value + "'");
    }
  }
  return desc;
}

inline ProblemDescription load_problem_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open problem file: " + path);
  return load_problem(in);
}

inline void save_problem(std::ostream& out, const ProblemDescription& desc) {
  out << "nx=" << desc.grid.nx << "\n";
  out << "ny=" << desc.grid.ny << "\n";
  out << "edge_x0=" << desc.dirichlet.edge_x0 << "\n";
  out << "edge_x1=" << desc.dirichlet.edge_x1 << "\n";
  out << "edge_y0=" << desc.dirichlet.edge_y0 << "\n";
  out << "edge_y1=" << desc.dirichlet.edge_y1 << "\n";
  for (const PinnedCell& pin : desc.dirichlet.pins) {
    out << "pin " << pin.x << " " << pin.y << " " << pin.value << "\n";
  }
}

}  // namespace dheat
