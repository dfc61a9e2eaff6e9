#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "eulerwave/common.hpp"
#include "eulerwave/field.hpp"
#include "eulerwave/gas.hpp"

namespace eulerwave::fv {

/// (rho, rho u1, rho u2)
using Conserved = std::array<double, 3>;

/// Uniform cell-centred mesh on [lower, upper].
struct FvGrid {
  int nx = 0;
  int ny = 0;
  Vec<2> lower = Vec<2>::Zero();
  Vec<2> upper = Vec<2>::Ones();

  double dx() const { return (upper[0] - lower[0]) / nx; }
  double dy() const { return (upper[1] - lower[1]) / ny; }
  double cell_area() const { return dx() * dy(); }
  Vec<2> center(int i, int j) const {
    return {lower[0] + (i + 0.5) * dx(), lower[1] + (j + 0.5) * dy()};
  }
  std::size_t cells() const { return static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny); }
  std::size_t index(int i, int j) const {
    return static_cast<std::size_t>(j) * static_cast<std::size_t>(nx) + static_cast<std::size_t>(i);
  }

  void validate() const {
    if (nx < 2 || ny < 2) throw DomainError("finite-volume grid needs at least 2x2 cells");
    if (!(upper[0] > lower[0] && upper[1] > lower[1])) {
      throw DomainError("finite-volume domain must have positive extent");
    }
  }
};

/// Ghost-cell state at a boundary-cell position and time. An empty function
/// selects zero-gradient (outflow) ghosts that copy the adjacent interior cell.
using GhostState = std::function<Conserved(const Vec<2>& ghost_center, double t)>;

struct FvState {
  FvGrid grid;
  GasParams gas;
  std::vector<Conserved> cells;  ///< row-major, x fastest
  double time = 0.0;
  double cfl = 0.45;
  GhostState ghost;
  std::size_t steps = 0;

  const Conserved& at(int i, int j) const { return cells[grid.index(i, j)]; }
  Conserved& at(int i, int j) { return cells[grid.index(i, j)]; }
};

enum class Boundary { zero_gradient, exact };

namespace detail {

inline std::string cell_label(const FvGrid& g, int i, int j) {
  const Vec<2> c = g.center(i, j);
  return "cell (" + std::to_string(i) + ", " + std::to_string(j) + ") at x = (" +
         std::to_string(c[0]) + ", " + std::to_string(c[1]) + ")";
}

inline void check_density(const FvState& st, const char* context) {
  std::vector<std::string> bad;
  for (int j = 0; j < st.grid.ny; ++j) {
    for (int i = 0; i < st.grid.nx; ++i) {
      const double rho = st.at(i, j)[0];
      if (!(rho > 0.0) || !std::isfinite(rho)) bad.push_back(cell_label(st.grid, i, j));
    }
  }
  if (bad.empty()) return;
  std::string msg = std::string(context) + ": vacuum in " + std::to_string(bad.size()) + " cell(s):";
  for (std::size_t k = 0; k < bad.size() && k < 5; ++k) msg += " " + bad[k] + ";";
  throw VacuumError(msg);
}

struct Primitive {
  double rho, u, v, p, c;
};

inline Primitive primitive(const GasParams& gas, const Conserved& q) {
  const double rho = q[0];
  const double p = gas.k() * std::pow(rho, gas.gamma());
  return {rho, q[1] / rho, q[2] / rho, p, std::sqrt(gas.gamma() * p / rho)};
}

/// Rusanov flux through a face with unit normal along `axis` (0 = x, 1 = y).
inline Conserved rusanov(const GasParams& gas, const Conserved& left, const Conserved& right,
                         int axis) {
  const Primitive l = primitive(gas, left);
  const Primitive r = primitive(gas, right);
  const double un_l = axis == 0 ? l.u : l.v;
  const double un_r = axis == 0 ? r.u : r.v;
  const Conserved f_l{left[0] * un_l, left[1] * un_l + (axis == 0 ? l.p : 0.0),
                      left[2] * un_l + (axis == 1 ? l.p : 0.0)};
  const Conserved f_r{right[0] * un_r, right[1] * un_r + (axis == 0 ? r.p : 0.0),
                      right[2] * un_r + (axis == 1 ? r.p : 0.0)};
  const double s_max = std::max(std::abs(un_l) + l.c, std::abs(un_r) + r.c);
  Conserved flux;
  for (std::size_t k = 0; k < 3; ++k) {
    flux[k] = 0.5 * (f_l[k] + f_r[k]) - 0.5 * s_max * (right[k] - left[k]);
  }
  return flux;
}

inline Conserved ghost_value(const FvState& st, int i, int j, int inside_i, int inside_j) {
  if (!st.ghost) return st.at(inside_i, inside_j);
  return st.ghost(st.grid.center(i, j), st.time);
}

}  // namespace detail

inline Conserved conserved_from_sample(const FieldSample<2>& s) {
  return {s.rho, s.rho * s.u[0], s.rho * s.u[1]};
}

/// Generic initialiser from a point function; boundary defaults to zero-gradient.
inline FvState init_from_function(const GasParams& gas, const FvGrid& grid,
                                  const std::function<Conserved(const Vec<2>&)>& init) {
  grid.validate();
  FvState st{grid, gas, std::vector<Conserved>(grid.cells()), 0.0, 0.45, {}, 0};
  for (int j = 0; j < grid.ny; ++j) {
    for (int i = 0; i < grid.nx; ++i) st.at(i, j) = init(grid.center(i, j));
  }
  detail::check_density(st, "initial data");
  return st;
}

/// Cell-centre samples of the exact field at t = 0. With Boundary::exact the
/// ghost cells are filled from the exact field at the current time, which is
/// only possible before its breaking time.
inline FvState init_from_exact(const ExactField<2>& ef, const FvGrid& grid,
                               Boundary boundary = Boundary::zero_gradient) {
  grid.validate();
  FvState st{grid, ef.gas(), std::vector<Conserved>(grid.cells()), 0.0, 0.45, {}, 0};
  std::vector<std::string> bad;
  for (int j = 0; j < grid.ny; ++j) {
    for (int i = 0; i < grid.nx; ++i) {
      const auto s = ef.sample(grid.center(i, j), 0.0);
      if (!s.valid) {
        bad.push_back(detail::cell_label(grid, i, j));
        continue;
      }
      st.at(i, j) = conserved_from_sample(s);
    }
  }
  if (!bad.empty()) {
    std::string msg = "exact field is outside the positivity region in " +
                      std::to_string(bad.size()) + " cell(s):";
    for (std::size_t k = 0; k < bad.size() && k < 5; ++k) msg += " " + bad[k] + ";";
    throw VacuumError(msg);
  }
  if (boundary == Boundary::exact) {
    st.ghost = [ef](const Vec<2>& x, double t) {
      const auto s = ef.sample(x, t);
      if (!s.valid) throw VacuumError("exact ghost state outside the positivity region");
      return conserved_from_sample(s);
    };
  }
  return st;
}

/// Largest |u_n| + c over all cells, reduced in a fixed order.
inline double max_wave_speed(const FvState& st) {
  double s = 0.0;
  for (const auto& q : st.cells) {
    const auto pr = detail::primitive(st.gas, q);
    s = std::max(s, std::max(std::abs(pr.u), std::abs(pr.v)) + pr.c);
  }
  return s;
}

inline double stable_dt(const FvState& st) {
  const double s = max_wave_speed(st);
  if (!(s > 0.0)) return kInfinity;
  return st.cfl * std::min(st.grid.dx(), st.grid.dy()) / s;
}

/// One unsplit forward-Euler update of size dt with Rusanov face fluxes.
inline FvState step_with(const FvState& st, double dt) {
  const FvGrid& g = st.grid;
  const int nx = g.nx;
  const int ny = g.ny;
  const double lx = dt / g.dx();
  const double ly = dt / g.dy();

  // Face fluxes: x faces (nx+1 per row), y faces (ny+1 per column).
  std::vector<Conserved> fx(static_cast<std::size_t>((nx + 1) * ny));
  std::vector<Conserved> fy(static_cast<std::size_t>(nx * (ny + 1)));
  const auto fx_at = [&](int i, int j) -> Conserved& {
    return fx[static_cast<std::size_t>(j * (nx + 1) + i)];
  };
  const auto fy_at = [&](int i, int j) -> Conserved& {
    return fy[static_cast<std::size_t>(j * nx + i)];
  };

  for (int j = 0; j < ny; ++j) {
    const Conserved west = detail::ghost_value(st, -1, j, 0, j);
    const Conserved east = detail::ghost_value(st, nx, j, nx - 1, j);
    fx_at(0, j) = detail::rusanov(st.gas, west, st.at(0, j), 0);
    for (int i = 1; i < nx; ++i) fx_at(i, j) = detail::rusanov(st.gas, st.at(i - 1, j), st.at(i, j), 0);
    fx_at(nx, j) = detail::rusanov(st.gas, st.at(nx - 1, j), east, 0);
  }
  for (int i = 0; i < nx; ++i) {
    const Conserved south = detail::ghost_value(st, i, -1, i, 0);
    const Conserved north = detail::ghost_value(st, i, ny, i, ny - 1);
    fy_at(i, 0) = detail::rusanov(st.gas, south, st.at(i, 0), 1);
    for (int j = 1; j < ny; ++j) fy_at(i, j) = detail::rusanov(st.gas, st.at(i, j - 1), st.at(i, j), 1);
    fy_at(i, ny) = detail::rusanov(st.gas, st.at(i, ny - 1), north, 1);
  }

  FvState next = st;
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      Conserved& q = next.at(i, j);
      const Conserved& e = fx_at(i + 1, j);
      const Conserved& w = fx_at(i, j);
      const Conserved& n = fy_at(i, j + 1);
      const Conserved& s = fy_at(i, j);
      for (std::size_t k = 0; k < 3; ++k) q[k] -= lx * (e[k] - w[k]) + ly * (n[k] - s[k]);
    }
  }
  next.time = st.time + dt;
  next.steps = st.steps + 1;
  detail::check_density(next, "finite-volume step");
  return next;
}

inline FvState step(const FvState& st) {
  detail::check_density(st, "finite-volume step");
  return step_with(st, stable_dt(st));
}

using StepObserver = std::function<void(const FvState&)>;

/// Steps until t_end, shortening the last step to land on it exactly. The
/// observer sees every intermediate state and cannot influence the schedule.
inline FvState run_until(FvState st, double t_end, const StepObserver& observer = {}) {
  if (!(t_end >= st.time)) {
    throw PreconditionError("run_until needs t_end >= current time");
  }
  detail::check_density(st, "finite-volume run");
  while (st.time < t_end) {
    double dt = stable_dt(st);
    const bool last = !(st.time + dt < t_end);
    if (last) dt = t_end - st.time;
    st = step_with(st, dt);
    if (last) st.time = t_end;
    if (observer) observer(st);
  }
  return st;
}

/// Totals of (rho, rho u1, rho u2) times the cell area.
inline Conserved totals(const FvState& st) {
  Conserved sum{0.0, 0.0, 0.0};
  for (const auto& q : st.cells) {
    for (std::size_t k = 0; k < 3; ++k) sum[k] += q[k];
  }
  for (auto& v : sum) v *= st.grid.cell_area();
  return sum;
}

/// Cell-area-weighted L1 distance of (rho, rho u1, rho u2) to the exact field
/// sampled at cell centres at the state's time.
inline Conserved l1_error(const FvState& st, const ExactField<2>& ef) {
  Conserved err{0.0, 0.0, 0.0};
  std::vector<std::string> bad;
  for (int j = 0; j < st.grid.ny; ++j) {
    for (int i = 0; i < st.grid.nx; ++i) {
      const auto s = ef.sample(st.grid.center(i, j), st.time);
      if (!s.valid) {
        bad.push_back(detail::cell_label(st.grid, i, j));
        continue;
      }
      const Conserved ex = conserved_from_sample(s);
      const Conserved& q = st.at(i, j);
      for (std::size_t k = 0; k < 3; ++k) err[k] += std::abs(q[k] - ex[k]);
    }
  }
  if (!bad.empty()) {
    throw PositivityError("exact field invalid at " + std::to_string(bad.size()) +
                          " cell centre(s), first " + bad.front());
  }
  for (auto& v : err) v *= st.grid.cell_area();
  return err;
}

/// Density at an arbitrary point by bilinear interpolation between cell centres.
inline double density_at(const FvState& st, const Vec<2>& x) {
  const FvGrid& g = st.grid;
  const double fx = std::clamp((x[0] - g.lower[0]) / g.dx() - 0.5, 0.0, g.nx - 1.0);
  const double fy = std::clamp((x[1] - g.lower[1]) / g.dy() - 0.5, 0.0, g.ny - 1.0);
  const int i = std::min(static_cast<int>(fx), g.nx - 2);
  const int j = std::min(static_cast<int>(fy), g.ny - 2);
  const double tx = fx - i;
  const double ty = fy - j;
  return (1 - tx) * (1 - ty) * st.at(i, j)[0] + tx * (1 - ty) * st.at(i + 1, j)[0] +
         (1 - tx) * ty * st.at(i, j + 1)[0] + tx * ty * st.at(i + 1, j + 1)[0];
}

struct Polyline {
  double level = 0.0;
  std::vector<std::array<double, 2>> points;
};

/// Marching-squares contours of p = k rho^gamma on the lattice of cell centres,
/// with segments joined into polylines (closed loops repeat their first point).
inline std::vector<Polyline> pressure_contours(const FvState& st, std::span<const double> levels) {
  const FvGrid& g = st.grid;
  const int nx = g.nx;
  const int ny = g.ny;
  std::vector<double> p(g.cells());
  for (std::size_t c = 0; c < p.size(); ++c) p[c] = pressure(st.gas, st.cells[c][0]);
  const auto p_at = [&](int i, int j) { return p[g.index(i, j)]; };

  // Edge keys: horizontal edge (i,j)-(i+1,j) -> j*nx + i; vertical (i,j)-(i,j+1)
  // -> nx*ny + j*nx + i.
  const auto h_key = [&](int i, int j) { return static_cast<long>(j) * nx + i; };
  const auto v_key = [&](int i, int j) {
    return static_cast<long>(nx) * ny + static_cast<long>(j) * nx + i;
  };

  std::vector<Polyline> out;
  for (double level : levels) {
    std::map<long, std::array<double, 2>> crossing;
    const auto cross = [&](long key, int i0, int j0, int i1, int j1) {
      auto it = crossing.find(key);
      if (it != crossing.end()) return key;
      const double a = p_at(i0, j0);
      const double b = p_at(i1, j1);
      const double t = (level - a) / (b - a);
      const Vec<2> x0 = g.center(i0, j0);
      const Vec<2> x1 = g.center(i1, j1);
      crossing[key] = {x0[0] + t * (x1[0] - x0[0]), x0[1] + t * (x1[1] - x0[1])};
      return key;
    };

    std::vector<std::array<long, 2>> segments;
    for (int j = 0; j + 1 < ny; ++j) {
      for (int i = 0; i + 1 < nx; ++i) {
        const double c00 = p_at(i, j);
        const double c10 = p_at(i + 1, j);
        const double c11 = p_at(i + 1, j + 1);
        const double c01 = p_at(i, j + 1);
        const int mask = (c00 >= level ? 1 : 0) | (c10 >= level ? 2 : 0) |
                         (c11 >= level ? 4 : 0) | (c01 >= level ? 8 : 0);
        if (mask == 0 || mask == 15) continue;
        const auto bottom = [&] { return cross(h_key(i, j), i, j, i + 1, j); };
        const auto right = [&] { return cross(v_key(i + 1, j), i + 1, j, i + 1, j + 1); };
        const auto top = [&] { return cross(h_key(i, j + 1), i, j + 1, i + 1, j + 1); };
        const auto left = [&] { return cross(v_key(i, j), i, j, i, j + 1); };
        const bool centre_high = 0.25 * (c00 + c10 + c11 + c01) >= level;
        switch (mask) {
          case 1: case 14: segments.push_back({left(), bottom()}); break;
          case 2: case 13: segments.push_back({bottom(), right()}); break;
          case 3: case 12: segments.push_back({left(), right()}); break;
          case 4: case 11: segments.push_back({right(), top()}); break;
          case 6: case 9: segments.push_back({bottom(), top()}); break;
          case 7: case 8: segments.push_back({left(), top()}); break;
          case 5:
            if (centre_high) {
              segments.push_back({left(), top()});
              segments.push_back({bottom(), right()});
            } else {
              segments.push_back({left(), bottom()});
              segments.push_back({right(), top()});
            }
            break;
          case 10:
            if (centre_high) {
              segments.push_back({left(), bottom()});
              segments.push_back({right(), top()});
            } else {
              segments.push_back({left(), top()});
              segments.push_back({bottom(), right()});
            }
            break;
          default: break;
        }
      }
    }

    std::map<long, std::vector<std::size_t>> touching;
    for (std::size_t s = 0; s < segments.size(); ++s) {
      touching[segments[s][0]].push_back(s);
      touching[segments[s][1]].push_back(s);
    }
    std::vector<bool> used(segments.size(), false);
    const auto trace = [&](std::size_t first, long start) {
      Polyline line{level, {crossing[start]}};
      long at = start;
      std::size_t seg = first;
      while (true) {
        used[seg] = true;
        at = segments[seg][0] == at ? segments[seg][1] : segments[seg][0];
        line.points.push_back(crossing[at]);
        std::size_t next = segments.size();
        for (std::size_t cand : touching[at]) {
          if (!used[cand]) {
            next = cand;
            break;
          }
        }
        if (next == segments.size()) break;
        seg = next;
      }
      out.push_back(std::move(line));
    };
    // Open polylines start at an end touched by a single segment.
    for (std::size_t s = 0; s < segments.size(); ++s) {
      if (used[s]) continue;
      for (long end : segments[s]) {
        if (!used[s] && touching[end].size() == 1) trace(s, end);
      }
    }
    for (std::size_t s = 0; s < segments.size(); ++s) {
      if (!used[s]) trace(s, segments[s][0]);
    }
  }
  return out;
}

/// One block per polyline: a `# level=` comment, an `x,y` header, the points,
/// and a blank separator line.
inline void write_contours_csv(std::ostream& os, const std::vector<Polyline>& lines) {
  char buf[64];
  const auto num = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return std::string(buf);
  };
  for (const auto& line : lines) {
    os << "# level=" << num(line.level) << '\n' << "x,y\n";
    for (const auto& pt : line.points) os << num(pt[0]) << ',' << num(pt[1]) << '\n';
    os << '\n';
  }
}

/// Writes the pressure contours at `levels` to a CSV polyline file.
inline std::size_t pressure_contour_export(const FvState& st, std::span<const double> levels,
                                           const std::string& path) {
  detail::check_density(st, "contour export");
  const auto lines = pressure_contours(st, levels);
  std::ofstream os(path);
  if (!os) throw Error("cannot open " + path + " for writing");
  write_contours_csv(os, lines);
  return lines.size();
}

}  // namespace eulerwave::fv
