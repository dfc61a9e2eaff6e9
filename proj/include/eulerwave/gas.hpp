#pragma once

#include <cmath>
#include <string>

#include "eulerwave/common.hpp"

namespace eulerwave {

/// Isentropic gas p = k rho^gamma with 1 < gamma < 3.
///
/// Besides gamma and k the class carries a = (gamma - 1)/2, which is both the
/// sound-speed scale of the w variable and minus the dot product required
/// between wave directions.
class GasParams {
 public:
  GasParams(double gamma, double k) : gamma_(gamma), k_(k) {
    if (!(gamma > 1.0 && gamma < 3.0)) {
      throw DomainError("gamma must lie in (1, 3), got " + std::to_string(gamma));
    }
    if (!(k > 0.0) || !std::isfinite(k)) {
      throw DomainError("pressure constant k must be positive, got " + std::to_string(k));
    }
    a_ = (gamma - 1.0) / 2.0;
    // 1/a taken directly from gamma; it is the exponent of the density law.
    inv_a_ = 2.0 / (gamma - 1.0);
    scale_ = a_ / std::sqrt(k * gamma);
  }

  double gamma() const { return gamma_; }
  double k() const { return k_; }
  double a() const { return a_; }
  double inv_a() const { return inv_a_; }
  /// 1 + a, the characteristic speed factor of every Burgers wave.
  double speed_factor() const { return 1.0 + a_; }
  /// a / sqrt(k gamma), the base multiplier in rho = (scale * w)^(1/a).
  double density_scale() const { return scale_; }

 private:
  double gamma_;
  double k_;
  double a_;
  double inv_a_;
  double scale_;
};

inline GasParams make_gas(double gamma, double k = 1.0) { return GasParams(gamma, k); }

inline double rho_from_w(const GasParams& g, double w) {
  if (!(w > 0.0)) {
    throw DomainError("rho_from_w requires w > 0, got " + std::to_string(w));
  }
  return std::pow(g.density_scale() * w, g.inv_a());
}

inline double w_from_rho(const GasParams& g, double rho) {
  if (!(rho > 0.0)) {
    throw DomainError("w_from_rho requires rho > 0, got " + std::to_string(rho));
  }
  return g.inv_a() * std::sqrt(g.gamma() * g.k() * std::pow(rho, g.gamma() - 1.0));
}

inline double pressure(const GasParams& g, double rho) {
  if (!(rho >= 0.0)) {
    throw DomainError("pressure requires rho >= 0, got " + std::to_string(rho));
  }
  return g.k() * std::pow(rho, g.gamma());
}

inline double sound_speed(const GasParams& g, double rho) {
  return std::sqrt(g.gamma() * g.k() * std::pow(rho, g.gamma() - 1.0));
}

}  // namespace eulerwave
