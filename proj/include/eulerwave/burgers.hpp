#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <string_view>
#include <type_traits>
#include <variant>

#include "eulerwave/common.hpp"
#include "eulerwave/gas.hpp"

namespace eulerwave {

struct ConstantProfile {
  double value = 0.0;
};

/// f0(s) = slope * s + offset
struct LinearProfile {
  double slope = 0.0;
  double offset = 0.0;
};

/// f0(s) = offset + amplitude * sin(wavenumber * s)
struct SineProfile {
  double amplitude = 0.0;
  double wavenumber = 1.0;
  double offset = 0.0;
};

/// f0(s) = offset + amplitude * exp(-(s - center)^2 / width^2)
struct GaussianBumpProfile {
  double amplitude = 0.0;
  double center = 0.0;
  double width = 1.0;
  double offset = 0.0;
};

/// Closed-form initial data for one Burgers wave.
class BurgersProfile {
 public:
  using Variant = std::variant<ConstantProfile, LinearProfile, SineProfile, GaussianBumpProfile>;

  BurgersProfile(ConstantProfile p) : data_(p) { check(); }
  BurgersProfile(LinearProfile p) : data_(p) { check(); }
  BurgersProfile(SineProfile p) : data_(p) { check(); }
  BurgersProfile(GaussianBumpProfile p) : data_(p) { check(); }

  const Variant& data() const { return data_; }

  std::string_view kind() const {
    return std::visit(
        [](const auto& p) -> std::string_view {
          using T = std::decay_t<decltype(p)>;
          if constexpr (std::is_same_v<T, ConstantProfile>) return "constant";
          else if constexpr (std::is_same_v<T, LinearProfile>) return "linear";
          else if constexpr (std::is_same_v<T, SineProfile>) return "sine";
          else return "gaussian-bump";
        },
        data_);
  }

  double value(double s) const {
    return std::visit(
        [s](const auto& p) {
          using T = std::decay_t<decltype(p)>;
          if constexpr (std::is_same_v<T, ConstantProfile>) {
            return p.value;
          } else if constexpr (std::is_same_v<T, LinearProfile>) {
            return p.slope * s + p.offset;
          } else if constexpr (std::is_same_v<T, SineProfile>) {
            return p.offset + p.amplitude * std::sin(p.wavenumber * s);
          } else {
            const double z = (s - p.center) / p.width;
            return p.offset + p.amplitude * std::exp(-z * z);
          }
        },
        data_);
  }

  /// f0'(s)
  double slope(double s) const {
    return std::visit(
        [s](const auto& p) {
          using T = std::decay_t<decltype(p)>;
          if constexpr (std::is_same_v<T, ConstantProfile>) {
            return 0.0;
          } else if constexpr (std::is_same_v<T, LinearProfile>) {
            return p.slope;
          } else if constexpr (std::is_same_v<T, SineProfile>) {
            return p.amplitude * p.wavenumber * std::cos(p.wavenumber * s);
          } else {
            const double z = (s - p.center) / p.width;
            return -2.0 * p.amplitude * z / p.width * std::exp(-z * z);
          }
        },
        data_);
  }

  /// sup over s of -f0'(s), clipped below at zero.
  double max_descent() const {
    return std::visit(
        [](const auto& p) {
          using T = std::decay_t<decltype(p)>;
          if constexpr (std::is_same_v<T, ConstantProfile>) {
            return 0.0;
          } else if constexpr (std::is_same_v<T, LinearProfile>) {
            return std::max(-p.slope, 0.0);
          } else if constexpr (std::is_same_v<T, SineProfile>) {
            return std::abs(p.amplitude * p.wavenumber);
          } else {
            // |f0'| peaks at |s - center| = width / sqrt(2)
            return std::abs(p.amplitude) * std::sqrt(2.0) * std::exp(-0.5) / p.width;
          }
        },
        data_);
  }

  /// Bounds of f0 over the real line, infinite for a sloped linear profile.
  std::pair<double, double> range() const {
    return std::visit(
        [](const auto& p) -> std::pair<double, double> {
          using T = std::decay_t<decltype(p)>;
          if constexpr (std::is_same_v<T, ConstantProfile>) {
            return {p.value, p.value};
          } else if constexpr (std::is_same_v<T, LinearProfile>) {
            if (p.slope == 0.0) return {p.offset, p.offset};
            return {-kInfinity, kInfinity};
          } else if constexpr (std::is_same_v<T, SineProfile>) {
            const double amp = std::abs(p.amplitude);
            return {p.offset - amp, p.offset + amp};
          } else {
            return {p.offset + std::min(p.amplitude, 0.0), p.offset + std::max(p.amplitude, 0.0)};
          }
        },
        data_);
  }

 private:
  void check() const {
    std::visit(
        [](const auto& p) {
          using T = std::decay_t<decltype(p)>;
          bool finite = true;
          if constexpr (std::is_same_v<T, ConstantProfile>) {
            finite = std::isfinite(p.value);
          } else if constexpr (std::is_same_v<T, LinearProfile>) {
            finite = std::isfinite(p.slope) && std::isfinite(p.offset);
          } else if constexpr (std::is_same_v<T, SineProfile>) {
            finite = std::isfinite(p.amplitude) && std::isfinite(p.wavenumber) &&
                     std::isfinite(p.offset);
          } else {
            finite = std::isfinite(p.amplitude) && std::isfinite(p.center) &&
                     std::isfinite(p.width) && std::isfinite(p.offset);
            if (finite && !(p.width > 0.0)) {
              throw DomainError("gaussian-bump width must be positive");
            }
          }
          if (!finite) throw DomainError("profile parameters must be finite");
        },
        data_);
  }

  Variant data_;
};

/// f and its first partial derivatives at one (s, t), plus the characteristic foot.
struct BurgersPoint {
  double f;
  double f_s;
  double f_t;
  double foot;
};

/// Classical solution of f_t + c f f_s = 0 with c = 1 + a, up to the breaking time.
class BurgersWave {
 public:
  BurgersWave(BurgersProfile profile, double speed_factor)
      : profile_(std::move(profile)), speed_factor_(speed_factor) {
    if (!(speed_factor > 0.0) || !std::isfinite(speed_factor)) {
      throw DomainError("speed factor must be positive");
    }
    const double m = profile_.max_descent();
    t_break_ = m > 0.0 ? 1.0 / (speed_factor_ * m) : kInfinity;
  }

  const BurgersProfile& profile() const { return profile_; }
  double speed_factor() const { return speed_factor_; }
  double breaking_time() const { return t_break_; }

  /// Traces the characteristic through (s, t) back to its foot s0, solving
  /// s0 + c f0(s0) t = s by Newton's method safeguarded with a bisection bracket.
  BurgersPoint eval(double s, double t) const {
    if (!(t >= 0.0)) throw PreconditionError("Burgers evaluation needs t >= 0");
    if (!(t < t_break_)) {
      throw BreakingTimeError("t = " + std::to_string(t) + " is not before the breaking time " +
                                  std::to_string(t_break_),
                              -1, t_break_);
    }
    const double ct = speed_factor_ * t;
    const double foot = t == 0.0 ? s : solve_foot(s, ct);
    const double f = profile_.value(foot);
    const double d0 = profile_.slope(foot);
    const double f_s = d0 / (1.0 + ct * d0);
    return {f, f_s, -speed_factor_ * f * f_s, foot};
  }

 private:
  double solve_foot(double s, double ct) const {
    const auto phi = [&](double x) { return x + ct * profile_.value(x) - s; };
    const double tol = 1e-13 * (1.0 + std::abs(s));

    double x = s - ct * profile_.value(s);
    double fx = phi(x);
    if (fx == 0.0) return x;

    // Bracket grown geometrically around the initial guess.
    double lo = x;
    double hi = x;
    double f_lo = fx;
    double f_hi = fx;
    double step = std::max(1.0, std::abs(fx));
    for (int i = 0; i < 200 && !(f_lo <= 0.0 && f_hi >= 0.0); ++i) {
      if (f_lo > 0.0) {
        lo = x - step;
        f_lo = phi(lo);
      }
      if (f_hi < 0.0) {
        hi = x + step;
        f_hi = phi(hi);
      }
      step *= 2.0;
    }
    if (!(f_lo <= 0.0 && f_hi >= 0.0)) {
      throw ConvergenceError("could not bracket the characteristic foot for s = " +
                             std::to_string(s));
    }

    constexpr double eps = std::numeric_limits<double>::epsilon();
    for (int iter = 0; iter < 200; ++iter) {
      if (fx == 0.0) return x;
      if (fx < 0.0) {
        lo = x;
      } else {
        hi = x;
      }
      const double dphi = 1.0 + ct * profile_.slope(x);
      double next = x - fx / dphi;
      if (!(dphi > 0.0) || !(next >= lo && next <= hi)) next = 0.5 * (lo + hi);
      if (next == x) break;
      const double moved = std::abs(next - x);
      x = next;
      fx = phi(x);
      if (moved <= 4.0 * eps * (1.0 + std::abs(x)) || hi - lo <= 4.0 * eps * (1.0 + std::abs(x))) {
        break;
      }
    }
    // Evaluating phi near the root cancels terms of size |x| and ct |f0(x)|.
    const double floor = 8.0 * eps * (std::abs(x) + std::abs(ct * profile_.value(x)) + std::abs(s));
    if (!(std::abs(fx) <= std::max(tol, floor))) {
      throw ConvergenceError("characteristic root solve did not converge for s = " +
                             std::to_string(s) + " (residual " + std::to_string(fx) + ")");
    }
    return x;
  }

  BurgersProfile profile_;
  double speed_factor_;
  double t_break_;
};

inline BurgersWave make_wave(const GasParams& gas, BurgersProfile profile) {
  return BurgersWave(std::move(profile), gas.speed_factor());
}

inline double breaking_time(const BurgersWave& w) { return w.breaking_time(); }

/// |D_t f + c f D_s f| with central differences of step h on the evaluated f.
inline double pde_residual(const BurgersWave& w, double s, double t, double h) {
  if (!(h > 0.0)) throw PreconditionError("finite-difference step must be positive");
  if (!(t - h >= 0.0)) throw PreconditionError("pde_residual needs t - h >= 0");
  const double f = w.eval(s, t).f;
  const double d_t = (w.eval(s, t + h).f - w.eval(s, t - h).f) / (2.0 * h);
  const double d_s = (w.eval(s + h, t).f - w.eval(s - h, t).f) / (2.0 * h);
  return std::abs(d_t + w.speed_factor() * f * d_s);
}

/// Jump speed of f_t + ((1+a) f^2 / 2)_s = 0 between two states.
inline double rankine_hugoniot_speed(double a, double f_left, double f_right) {
  return (1.0 + a) * 0.5 * (f_left + f_right);
}

/// Shock speed for a compressive jump f_left > f_right.
inline double riemann_shock(double a, double f_left, double f_right) {
  if (!(f_left > f_right)) {
    throw PreconditionError("a Burgers shock needs f_left > f_right");
  }
  return rankine_hugoniot_speed(a, f_left, f_right);
}

}  // namespace eulerwave
