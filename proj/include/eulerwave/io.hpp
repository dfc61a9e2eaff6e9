#pragma once

#include <charconv>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <system_error>
#include <vector>

#include <nlohmann/json.hpp>

#include "eulerwave/common.hpp"
#include "eulerwave/field.hpp"
#include "eulerwave/verify.hpp"

namespace eulerwave::io {

/// Shortest form with 17 significant digits, enough to round-trip any double.
inline std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

inline double parse_double(std::string_view text) {
  double v = 0.0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size()) {
    throw Error("not a number: '" + std::string(text) + "'");
  }
  return v;
}

template <int Dim>
std::string snapshot_header() {
  static const char* axes[3] = {"x", "y", "z"};
  std::string h;
  for (int d = 0; d < Dim; ++d) h += std::string(axes[d]) + ",";
  for (int d = 0; d < Dim; ++d) h += "u" + std::to_string(d + 1) + ",";
  return h + "rho,p,w,S,valid";
}

/// `x,y[,z],u1,u2[,u3],rho,p,w,S,valid`, one row per grid point, x fastest.
template <int Dim>
void write_snapshot_csv(std::ostream& os, const FieldSnapshot<Dim>& snap) {
  os << snapshot_header<Dim>() << '\n';
  for (std::size_t i = 0; i < snap.samples.size(); ++i) {
    const auto x = snap.grid.point(i);
    const auto& s = snap.samples[i];
    for (int d = 0; d < Dim; ++d) os << format_double(x[d]) << ',';
    for (int d = 0; d < Dim; ++d) os << format_double(s.u[d]) << ',';
    os << format_double(s.rho) << ',' << format_double(s.p) << ',' << format_double(s.w) << ','
       << format_double(s.S) << ',' << (s.valid ? 1 : 0) << '\n';
  }
}

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

inline std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream is(line);
  while (std::getline(is, cell, sep)) out.push_back(cell);
  return out;
}

/// Reads a numeric CSV with one header line (snapshot files and convergence tables).
inline CsvTable read_csv(std::istream& is) {
  CsvTable t;
  std::string line;
  if (!std::getline(is, line)) throw Error("empty CSV input");
  t.header = split(line, ',');
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    for (const auto& cell : split(line, ',')) row.push_back(parse_double(cell));
    if (row.size() != t.header.size()) throw Error("CSV row width does not match header");
    t.rows.push_back(std::move(row));
  }
  return t;
}

/// ASCII legacy VTK STRUCTURED_POINTS with `velocity` and scalars rho, p, w.
template <int Dim>
void write_snapshot_vtk(std::ostream& os, const FieldSnapshot<Dim>& snap,
                        const std::string& title = "exact isentropic Euler field") {
  const auto& g = snap.grid;
  os << "# vtk DataFile Version 3.0\n" << title << " t=" << format_double(snap.time) << '\n';
  os << "ASCII\nDATASET STRUCTURED_POINTS\n";
  os << "DIMENSIONS";
  for (int d = 0; d < 3; ++d) os << ' ' << (d < Dim ? g.resolution[static_cast<std::size_t>(d)] : 1);
  os << "\nORIGIN";
  for (int d = 0; d < 3; ++d) os << ' ' << format_double(d < Dim ? g.lower[d] : 0.0);
  os << "\nSPACING";
  for (int d = 0; d < 3; ++d) {
    const double h = d < Dim ? g.spacing(d) : 0.0;
    os << ' ' << format_double(h > 0.0 ? h : 1.0);
  }
  os << "\nPOINT_DATA " << snap.samples.size() << '\n';
  os << "VECTORS velocity double\n";
  for (const auto& s : snap.samples) {
    for (int d = 0; d < 3; ++d) os << (d ? " " : "") << format_double(d < Dim ? s.u[d] : 0.0);
    os << '\n';
  }
  const auto scalar = [&](const char* name, auto get) {
    os << "SCALARS " << name << " double 1\nLOOKUP_TABLE default\n";
    for (const auto& s : snap.samples) os << format_double(get(s)) << '\n';
  };
  scalar("rho", [](const FieldSample<Dim>& s) { return s.rho; });
  scalar("p", [](const FieldSample<Dim>& s) { return s.p; });
  scalar("w", [](const FieldSample<Dim>& s) { return s.w; });
}

inline nlohmann::ordered_json to_json(const ResidualReport& r) {
  nlohmann::ordered_json j;
  j["max_momentum_residual"] = r.max_momentum_residual;
  j["max_continuity_residual"] = r.max_continuity_residual;
  j["max_symmetric_residual"] = r.max_symmetric_residual;
  j["h"] = r.h;
  j["t"] = r.t;
  j["points"] = r.points;
  j["seed"] = r.seed;
  return j;
}

}  // namespace eulerwave::io
