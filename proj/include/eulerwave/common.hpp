#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include <Eigen/Core>

namespace eulerwave {

template <int Dim>
using Vec = Eigen::Matrix<double, Dim, 1>;

template <int Dim>
using Mat = Eigen::Matrix<double, Dim, Dim>;

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();
inline constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

/// Base of every error the library throws.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A parameter lies outside the domain where the model is defined.
struct DomainError : Error {
  using Error::Error;
};

/// More directions were requested than the Gram constraint admits.
struct InfeasibleError : Error {
  using Error::Error;
};

struct ConvergenceError : Error {
  using Error::Error;
};

struct PreconditionError : Error {
  using Error::Error;
};

/// Evaluation requested at or past the first breaking time.
struct BreakingTimeError : PreconditionError {
  BreakingTimeError(const std::string& what, int wave, double t_break)
      : PreconditionError(what), wave_index(wave), breaking_time(t_break) {}
  int wave_index;
  double breaking_time;
};

/// Inconsistent pieces handed to field assembly.
struct MismatchError : Error {
  using Error::Error;
};

struct OrthogonalityError : Error {
  using Error::Error;
};

/// Sum of wave amplitudes is not positive, so density is undefined.
struct PositivityError : Error {
  using Error::Error;
};

/// Finite-volume density reached zero or lost finiteness.
struct VacuumError : Error {
  using Error::Error;
};

/// A finite-difference stencil touched a point outside the positivity region.
struct InvalidPointError : Error {
  using Error::Error;
};

}  // namespace eulerwave
