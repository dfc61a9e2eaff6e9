#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

#include "eulerwave/burgers.hpp"
#include "eulerwave/common.hpp"
#include "eulerwave/directions.hpp"
#include "eulerwave/field.hpp"
#include "eulerwave/gas.hpp"

namespace eulerwave {

/// Coefficient matrices of the symmetric hyperbolic system
/// q_t + sum_j A_j(q) q_{x_j} = 0 for q = (u, w), A_j = u_j I + a w L_j.
template <int Dim>
class SymmetricForm {
 public:
  static constexpr int kStates = Dim + 1;
  using StateVec = Vec<kStates>;
  using StateMat = Mat<kStates>;

  explicit SymmetricForm(GasParams gas) : gas_(gas) {
    for (int j = 0; j < Dim; ++j) {
      StateMat l = StateMat::Zero();
      l(j, Dim) = 1.0;
      l(Dim, j) = 1.0;
      L_[static_cast<std::size_t>(j)] = l;
    }
  }

  const GasParams& gas() const { return gas_; }
  const StateMat& L(int j) const { return L_[static_cast<std::size_t>(j)]; }

  StateMat A(int j, const StateVec& q) const {
    return q[j] * StateMat::Identity() + gas_.a() * q[Dim] * L(j);
  }

  /// sum_j v_j L_j for a direction v.
  StateMat directional(const Vec<Dim>& v) const {
    StateMat m = StateMat::Zero();
    for (int j = 0; j < Dim; ++j) m += v[j] * L(j);
    return m;
  }

 private:
  GasParams gas_;
  std::array<StateMat, Dim> L_;
};

struct ResidualReport {
  double max_momentum_residual = 0.0;
  double max_continuity_residual = 0.0;
  double max_symmetric_residual = 0.0;
  double h = 0.0;
  double t = 0.0;
  std::size_t points = 0;
  std::uint64_t seed = 0;
};

namespace detail {

inline double radical_inverse(std::uint64_t index, std::uint64_t base) {
  double result = 0.0;
  double scale = 1.0 / static_cast<double>(base);
  while (index > 0) {
    result += static_cast<double>(index % base) * scale;
    index /= base;
    scale /= static_cast<double>(base);
  }
  return result;
}

template <int Dim>
std::string format_point(const Vec<Dim>& x) {
  std::ostringstream os;
  os.precision(17);
  os << '(';
  for (int d = 0; d < Dim; ++d) os << (d ? ", " : "") << x[d];
  os << ')';
  return os.str();
}

template <int Dim>
void check_step(const ExactField<Dim>& ef, double t, double h) {
  if (!(h > 0.0)) throw PreconditionError("finite-difference step must be positive");
  if (!(t - h >= 0.0)) throw PreconditionError("residual evaluation needs t - h >= 0");
  if (!(t + h < ef.t_max())) {
    throw BreakingTimeError("t + h = " + std::to_string(t + h) + " reaches the breaking time " +
                                std::to_string(ef.t_max()),
                            ef.limiting_wave(), ef.t_max());
  }
}

/// Central-difference stencil around (x, t), all samples checked for validity.
template <int Dim>
struct Stencil {
  FieldSample<Dim> centre;
  FieldSample<Dim> t_plus;
  FieldSample<Dim> t_minus;
  std::array<FieldSample<Dim>, Dim> x_plus;
  std::array<FieldSample<Dim>, Dim> x_minus;
};

template <int Dim>
Stencil<Dim> build_stencil(const ExactField<Dim>& ef, const Vec<Dim>& x, double t, double h,
                           std::vector<std::string>& offenders) {
  Stencil<Dim> st;
  st.centre = ef.sample(x, t);
  st.t_plus = ef.sample(x, t + h);
  st.t_minus = ef.sample(x, t - h);
  bool ok = st.centre.valid && st.t_plus.valid && st.t_minus.valid;
  for (int j = 0; j < Dim; ++j) {
    const Vec<Dim> e = h * Vec<Dim>::Unit(j);
    st.x_plus[static_cast<std::size_t>(j)] = ef.sample(Vec<Dim>(x + e), t);
    st.x_minus[static_cast<std::size_t>(j)] = ef.sample(Vec<Dim>(x - e), t);
    ok = ok && st.x_plus[static_cast<std::size_t>(j)].valid &&
         st.x_minus[static_cast<std::size_t>(j)].valid;
  }
  if (!ok) offenders.push_back(format_point<Dim>(x));
  return st;
}

inline void raise_offenders(const std::vector<std::string>& offenders) {
  if (offenders.empty()) return;
  std::string msg = "stencil leaves the positivity region at " +
                    std::to_string(offenders.size()) + " point(s):";
  for (std::size_t i = 0; i < offenders.size() && i < 10; ++i) msg += " " + offenders[i];
  throw InvalidPointError(msg);
}

}  // namespace detail

/// Quasi-random (Halton) points in the box whose 2h neighbourhood in space and
/// h neighbourhood in time stays inside the positivity region. The seed offsets
/// the Halton index so the set is reproducible.
template <int Dim>
std::vector<Vec<Dim>> sample_points(const ExactField<Dim>& ef, const Vec<Dim>& lower,
                                    const Vec<Dim>& upper, double t, double h, std::size_t count,
                                    std::uint64_t seed = 0) {
  static constexpr std::uint64_t bases[3] = {2, 3, 5};
  std::vector<Vec<Dim>> points;
  points.reserve(count);
  const std::uint64_t max_tries = 50 * count + 1000;
  for (std::uint64_t i = 0; i < max_tries && points.size() < count; ++i) {
    Vec<Dim> x;
    for (int d = 0; d < Dim; ++d) {
      const double r = detail::radical_inverse(seed + i + 1, bases[d]);
      x[d] = lower[d] + r * (upper[d] - lower[d]);
    }
    bool ok = ef.sample(x, t).valid && ef.sample(x, t + h).valid && ef.sample(x, t - h).valid;
    for (int d = 0; ok && d < Dim; ++d) {
      for (double off : {-2.0 * h, -h, h, 2.0 * h}) {
        if (!ef.sample(Vec<Dim>(x + off * Vec<Dim>::Unit(d)), t).valid) {
          ok = false;
          break;
        }
      }
    }
    if (ok) points.push_back(x);
  }
  return points;
}

/// Finite-difference residuals of u_t + (u.grad)u + grad(p)/rho and
/// rho_t + div(rho u), maximised over the points. Only `sample` values enter,
/// never the analytic derivatives of the field.
template <int Dim>
ResidualReport primitive_residual(const ExactField<Dim>& ef, const std::vector<Vec<Dim>>& points,
                                  double t, double h) {
  detail::check_step(ef, t, h);
  ResidualReport report;
  report.h = h;
  report.t = t;
  report.points = points.size();
  std::vector<std::string> offenders;
  const double inv2h = 1.0 / (2.0 * h);
  for (const auto& x : points) {
    const auto st = detail::build_stencil(ef, x, t, h, offenders);
    if (!offenders.empty()) continue;
    const auto& c = st.centre;
    Vec<Dim> momentum = (st.t_plus.u - st.t_minus.u) * inv2h;
    double continuity = (st.t_plus.rho - st.t_minus.rho) * inv2h;
    for (int j = 0; j < Dim; ++j) {
      const auto& plus = st.x_plus[static_cast<std::size_t>(j)];
      const auto& minus = st.x_minus[static_cast<std::size_t>(j)];
      const Vec<Dim> du = (plus.u - minus.u) * inv2h;
      momentum += c.u[j] * du;
      momentum[j] += (plus.p - minus.p) * inv2h / c.rho;
      continuity += (plus.rho * plus.u[j] - minus.rho * minus.u[j]) * inv2h;
    }
    report.max_momentum_residual =
        std::max(report.max_momentum_residual, momentum.cwiseAbs().maxCoeff());
    report.max_continuity_residual = std::max(report.max_continuity_residual, std::abs(continuity));
  }
  detail::raise_offenders(offenders);
  return report;
}

/// Finite-difference residual of q_t + sum_j A_j(q) q_{x_j} with q = (u, w).
template <int Dim>
double symmetric_residual(const ExactField<Dim>& ef, const std::vector<Vec<Dim>>& points, double t,
                          double h) {
  using Form = SymmetricForm<Dim>;
  detail::check_step(ef, t, h);
  const Form form(ef.gas());
  const auto state = [](const FieldSample<Dim>& s) {
    typename Form::StateVec q;
    q.template head<Dim>() = s.u;
    q[Dim] = s.w;
    return q;
  };
  std::vector<std::string> offenders;
  const double inv2h = 1.0 / (2.0 * h);
  double worst = 0.0;
  for (const auto& x : points) {
    const auto st = detail::build_stencil(ef, x, t, h, offenders);
    if (!offenders.empty()) continue;
    const auto q = state(st.centre);
    typename Form::StateVec r = (state(st.t_plus) - state(st.t_minus)) * inv2h;
    for (int j = 0; j < Dim; ++j) {
      const auto a_j = form.A(j, q);
      if ((a_j - a_j.transpose()).cwiseAbs().maxCoeff() != 0.0) {
        throw std::logic_error("coefficient matrix A_j is not symmetric");
      }
      const typename Form::StateVec dq = (state(st.x_plus[static_cast<std::size_t>(j)]) -
                       state(st.x_minus[static_cast<std::size_t>(j)])) *
                      inv2h;
      r += a_j * dq;
    }
    worst = std::max(worst, r.cwiseAbs().maxCoeff());
  }
  detail::raise_offenders(offenders);
  return worst;
}

/// max over k != m of |z_m . (v_k, a)| with z_m = (v_m, 1), i.e. |v_m . v_k + a|.
template <int Dim>
double decoupling_check(const DirectionSet<Dim>& ds, const GasParams& gas) {
  double worst = 0.0;
  for (int m = 0; m < ds.size(); ++m) {
    for (int k = 0; k < ds.size(); ++k) {
      if (k != m) worst = std::max(worst, std::abs(ds[m].dot(ds[k]) + gas.a()));
    }
  }
  return worst;
}

/// max over k of |z_k . (v_k, a) - (1 + a)|, the Burgers speed factor of each wave.
template <int Dim>
double self_coefficient_error(const DirectionSet<Dim>& ds, const GasParams& gas) {
  double worst = 0.0;
  for (int k = 0; k < ds.size(); ++k) {
    worst = std::max(worst, std::abs(ds[k].dot(ds[k]) + gas.a() - gas.speed_factor()));
  }
  return worst;
}

/// max over k of |(sum_j v_kj L_j)(v_k, 1) - (v_k, 1)|.
template <int Dim>
double eigen_relation_residual(const SymmetricForm<Dim>& form, const DirectionSet<Dim>& ds) {
  double worst = 0.0;
  for (int k = 0; k < ds.size(); ++k) {
    typename SymmetricForm<Dim>::StateVec z;
    z.template head<Dim>() = ds[k];
    z[Dim] = 1.0;
    worst = std::max(worst, (form.directional(ds[k]) * z - z).cwiseAbs().maxCoeff());
  }
  return worst;
}

struct ShockJump {
  double f1_left;
  double f1_right;
  double sigma;
};

struct JumpMismatch {
  std::vector<double> f2;
  std::vector<double> lhs;  ///< [rho] sigma
  std::vector<double> rhs;  ///< [rho u] . v1
  std::vector<double> mismatch;

  double spread() const {
    if (mismatch.empty()) return 0.0;
    const auto [lo, hi] = std::minmax_element(mismatch.begin(), mismatch.end());
    return *hi - *lo;
  }
};

/// Both sides of the density jump condition [rho] sigma = [rho u] . v1 across a
/// shock in the first wave, with the second wave sweeping f2_values and the third
/// frozen at f3. Jumps are taken left minus right; u . v1 comes from the direction
/// set, which equals f1 - a f2 - a f3 for an admissible one.
template <int Dim>
JumpMismatch jump_mismatch_demo(const GasParams& gas, const DirectionSet<Dim>& ds,
                                const ShockJump& shock, double f3,
                                const std::vector<double>& f2_values) {
  if (ds.size() != 3) throw DomainError("jump demonstration needs three directions");
  if (!(shock.f1_left >= shock.f1_right)) {
    throw PreconditionError("jump demonstration needs f1_left >= f1_right");
  }
  JumpMismatch out;
  const auto side = [&](double f1, double f2) {
    const double s = f1 + f2 + f3;
    if (!(s > 0.0)) {
      throw PositivityError("wave sum " + std::to_string(s) + " is not positive (f1 = " +
                            std::to_string(f1) + ", f2 = " + std::to_string(f2) + ")");
    }
    const double rho = rho_from_w(gas, s);
    const Vec<Dim> u = f1 * ds[0] + f2 * ds[1] + f3 * ds[2];
    return std::pair{rho, rho * u.dot(ds[0])};
  };
  for (double f2 : f2_values) {
    const auto [rho_l, flux_l] = side(shock.f1_left, f2);
    const auto [rho_r, flux_r] = side(shock.f1_right, f2);
    const double lhs = (rho_l - rho_r) * shock.sigma;
    const double rhs = flux_l - flux_r;
    out.f2.push_back(f2);
    out.lhs.push_back(lhs);
    out.rhs.push_back(rhs);
    out.mismatch.push_back(lhs - rhs);
  }
  return out;
}

/// Convergence order from errors at two resolutions differing by `refinement`.
inline double observed_order(double coarse, double fine, double refinement = 2.0) {
  return std::log(coarse / fine) / std::log(refinement);
}

/// Primitive and symmetric residuals at each step size in `steps`.
template <int Dim>
std::vector<ResidualReport> residual_study(const ExactField<Dim>& ef,
                                           const std::vector<Vec<Dim>>& points, double t,
                                           const std::vector<double>& steps,
                                           std::uint64_t seed = 0) {
  std::vector<ResidualReport> out;
  for (double h : steps) {
    ResidualReport r = primitive_residual(ef, points, t, h);
    r.max_symmetric_residual = symmetric_residual(ef, points, t, h);
    r.seed = seed;
    out.push_back(r);
  }
  return out;
}

/// Residuals below this are treated as exact (rounding level for O(1) fields).
inline constexpr double kResidualFloor = 1e-10;

/// True when every successive pair of residuals (step ratio `refinement`)
/// shows an order in [lo, hi], or the finer one is already at rounding level.
inline bool decays_at_order(const std::vector<double>& residuals, double lo, double hi,
                            double refinement = 2.0) {
  for (std::size_t i = 1; i < residuals.size(); ++i) {
    if (residuals[i] <= kResidualFloor) continue;
    const double order = observed_order(residuals[i - 1], residuals[i], refinement);
    if (!(order >= lo && order <= hi)) return false;
  }
  return true;
}

}  // namespace eulerwave
