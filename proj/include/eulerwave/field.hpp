#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "eulerwave/burgers.hpp"
#include "eulerwave/common.hpp"
#include "eulerwave/directions.hpp"
#include "eulerwave/gas.hpp"

namespace eulerwave {

/// Below this wave sum the density derivatives are too ill-conditioned to trust.
inline constexpr double kMinValidSum = 1e-8;

/// Steady zero-eigenvalue mode g(x . v_carrier) v_perp that replaces the
/// Burgers term of the carrier direction.
template <int Dim>
struct Transverse {
  int carrier = 0;
  BurgersProfile profile = ConstantProfile{0.0};
  Vec<Dim> direction = Vec<Dim>::Zero();
};

/// Exact field and its analytic first derivatives at one point.
/// grad_u(i, j) holds du_i/dx_j. Density quantities are NaN when !valid.
template <int Dim>
struct FieldSample {
  Vec<Dim> u = Vec<Dim>::Zero();
  double rho = kNaN;
  double p = kNaN;
  double w = 0.0;
  double S = 0.0;
  bool valid = false;
  Mat<Dim> grad_u = Mat<Dim>::Zero();
  Vec<Dim> grad_rho = Vec<Dim>::Constant(kNaN);
  Vec<Dim> u_t = Vec<Dim>::Zero();
  double rho_t = kNaN;
  Vec<Dim> grad_S = Vec<Dim>::Zero();
  double S_t = 0.0;
};

template <int Dim>
class ExactField {
 public:
  ExactField(GasParams gas, DirectionSet<Dim> directions, std::vector<BurgersWave> waves,
             std::optional<Transverse<Dim>> transverse)
      : gas_(gas),
        directions_(std::move(directions)),
        waves_(std::move(waves)),
        transverse_(std::move(transverse)) {
    if (static_cast<int>(waves_.size()) != directions_.size()) {
      throw MismatchError("expected one wave per direction: " +
                          std::to_string(directions_.size()) + " directions, " +
                          std::to_string(waves_.size()) + " waves");
    }
    if (std::abs(directions_.a() - gas_.a()) > 1e-14) {
      throw MismatchError("direction set was built for a different gamma");
    }
    for (std::size_t j = 0; j < waves_.size(); ++j) {
      if (std::abs(waves_[j].speed_factor() - gas_.speed_factor()) > 1e-14) {
        throw MismatchError("wave " + std::to_string(j) + " has speed factor " +
                            std::to_string(waves_[j].speed_factor()) + ", gas requires " +
                            std::to_string(gas_.speed_factor()));
      }
    }
    if (transverse_) {
      const auto& tr = *transverse_;
      if (tr.carrier < 0 || tr.carrier >= directions_.size()) {
        throw MismatchError("transverse carrier index out of range");
      }
      if (std::abs(tr.direction.norm() - 1.0) > 1e-12) {
        throw OrthogonalityError("transverse direction must be a unit vector");
      }
      for (int k = 0; k < directions_.size(); ++k) {
        if (std::abs(tr.direction.dot(directions_[k])) > 1e-12) {
          throw OrthogonalityError("transverse direction is not orthogonal to direction " +
                                   std::to_string(k));
        }
      }
    }
    t_max_ = kInfinity;
    limiting_wave_ = -1;
    for (int j = 0; j < static_cast<int>(waves_.size()); ++j) {
      if (is_replaced(j)) continue;
      const double tb = waves_[static_cast<std::size_t>(j)].breaking_time();
      if (tb < t_max_) {
        t_max_ = tb;
        limiting_wave_ = j;
      }
    }
  }

  const GasParams& gas() const { return gas_; }
  const DirectionSet<Dim>& directions() const { return directions_; }
  const std::vector<BurgersWave>& waves() const { return waves_; }
  const std::optional<Transverse<Dim>>& transverse() const { return transverse_; }
  /// First breaking time over the active Burgers waves.
  double t_max() const { return t_max_; }
  /// Index of the wave that breaks first, -1 if none ever breaks.
  int limiting_wave() const { return limiting_wave_; }
  bool is_replaced(int j) const { return transverse_ && transverse_->carrier == j; }

  FieldSample<Dim> sample(const Vec<Dim>& x, double t) const {
    if (!(t >= 0.0)) throw PreconditionError("field evaluation needs t >= 0");
    if (!(t < t_max_)) {
      throw BreakingTimeError("t = " + std::to_string(t) + " reaches the breaking time " +
                                  std::to_string(t_max_) + " of wave " +
                                  std::to_string(limiting_wave_),
                              limiting_wave_, t_max_);
    }
    FieldSample<Dim> out;
    for (int j = 0; j < directions_.size(); ++j) {
      const Vec<Dim>& v = directions_[j];
      const double s = x.dot(v);
      if (is_replaced(j)) {
        const auto& tr = *transverse_;
        out.u += tr.profile.value(s) * tr.direction;
        out.grad_u += tr.profile.slope(s) * tr.direction * v.transpose();
        continue;
      }
      const BurgersPoint b = waves_[static_cast<std::size_t>(j)].eval(s, t);
      out.u += b.f * v;
      out.grad_u += b.f_s * v * v.transpose();
      out.u_t += b.f_t * v;
      out.S += b.f;
      out.grad_S += b.f_s * v;
      out.S_t += b.f_t;
    }
    out.w = out.S;
    out.valid = out.S >= kMinValidSum;
    if (out.valid) {
      out.rho = rho_from_w(gas_, out.S);
      out.p = pressure(gas_, out.rho);
      const double factor = gas_.inv_a() * out.rho / out.S;
      out.grad_rho = factor * out.grad_S;
      out.rho_t = factor * out.S_t;
    }
    return out;
  }

 private:
  GasParams gas_;
  DirectionSet<Dim> directions_;
  std::vector<BurgersWave> waves_;
  std::optional<Transverse<Dim>> transverse_;
  double t_max_;
  int limiting_wave_;
};

template <int Dim>
ExactField<Dim> assemble(const GasParams& gas, DirectionSet<Dim> ds, std::vector<BurgersWave> waves,
                         std::optional<Transverse<Dim>> transverse = std::nullopt) {
  return ExactField<Dim>(gas, std::move(ds), std::move(waves), std::move(transverse));
}

template <int Dim>
FieldSample<Dim> sample(const ExactField<Dim>& ef, const Vec<Dim>& x, double t) {
  return ef.sample(x, t);
}

/// Rectangular lattice of points including both bounds; x varies fastest.
template <int Dim>
struct GridSpec {
  Vec<Dim> lower = Vec<Dim>::Zero();
  Vec<Dim> upper = Vec<Dim>::Ones();
  std::array<int, Dim> resolution{};

  std::size_t size() const {
    std::size_t n = 1;
    for (int r : resolution) n *= static_cast<std::size_t>(r);
    return n;
  }

  double spacing(int axis) const {
    const int n = resolution[static_cast<std::size_t>(axis)];
    return n > 1 ? (upper[axis] - lower[axis]) / (n - 1) : 0.0;
  }

  std::array<int, Dim> index(std::size_t flat) const {
    std::array<int, Dim> idx{};
    for (int d = 0; d < Dim; ++d) {
      const auto r = static_cast<std::size_t>(resolution[static_cast<std::size_t>(d)]);
      idx[static_cast<std::size_t>(d)] = static_cast<int>(flat % r);
      flat /= r;
    }
    return idx;
  }

  Vec<Dim> point(std::size_t flat) const {
    const auto idx = index(flat);
    Vec<Dim> x;
    for (int d = 0; d < Dim; ++d) x[d] = lower[d] + idx[static_cast<std::size_t>(d)] * spacing(d);
    return x;
  }

  void validate() const {
    for (int d = 0; d < Dim; ++d) {
      if (resolution[static_cast<std::size_t>(d)] < 1) {
        throw DomainError("grid resolution must be at least 1 per axis");
      }
      if (!(upper[d] >= lower[d])) throw DomainError("grid upper bound below lower bound");
    }
  }
};

template <int Dim>
struct FieldSnapshot {
  GridSpec<Dim> grid;
  double time = 0.0;
  std::vector<FieldSample<Dim>> samples;
  std::size_t invalid_count = 0;
};

template <int Dim>
FieldSnapshot<Dim> sample_grid(const ExactField<Dim>& ef, const GridSpec<Dim>& grid, double t) {
  grid.validate();
  FieldSnapshot<Dim> snap{grid, t, {}, 0};
  snap.samples.reserve(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    snap.samples.push_back(ef.sample(grid.point(i), t));
    if (!snap.samples.back().valid) ++snap.invalid_count;
  }
  return snap;
}

}  // namespace eulerwave
