#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "eulerwave/common.hpp"
#include "eulerwave/gas.hpp"

namespace eulerwave {

/// |1 + a - a N| at or below this counts as a zero eigenvalue of the Gram
/// matrix, so decimal inputs such as gamma = 1.6666666667 hit the boundary case.
inline constexpr double kDegenerateTolerance = 1e-9;

/// Smallest eigenvalue of the N x N Gram matrix with unit diagonal and -a off it.
inline double gram_min_eigenvalue(double a, int n) { return 1.0 + a - a * n; }

/// Largest N for which N unit vectors in R^dim with pairwise dot -a exist.
///
/// The Gram matrix (1+a) I - a J has eigenvalues 1+a (N-1 times) and
/// 1 + a - a N, so it is PSD iff N <= (1+a)/a and its rank drops by one exactly
/// at equality.
inline int max_wave_count(const GasParams& gas, int dim) {
  if (dim != 2 && dim != 3) {
    throw DomainError("dimension must be 2 or 3, got " + std::to_string(dim));
  }
  const double a = gas.a();
  int best = 1;
  for (int n = 2; n <= dim + 1; ++n) {
    const double lambda = gram_min_eigenvalue(a, n);
    if (lambda < -kDegenerateTolerance) break;
    const int rank = std::abs(lambda) <= kDegenerateTolerance ? n - 1 : n;
    if (rank <= dim) best = n;
  }
  return best;
}

/// N vectors in R^Dim meant to satisfy v_i . v_j = -a for i != j.
///
/// Sets produced by build_directions satisfy the constraint by construction.
/// from_vectors accepts arbitrary input without checks so that deliberately
/// broken sets can be fed to the verifier; use gram_residual to inspect them.
template <int Dim>
class DirectionSet {
  static_assert(Dim == 2 || Dim == 3);

 public:
  static DirectionSet from_vectors(double a, std::vector<Vec<Dim>> vectors) {
    if (vectors.empty()) throw DomainError("a direction set needs at least one vector");
    for (const auto& v : vectors) {
      if (!v.allFinite()) throw DomainError("direction vectors must be finite");
    }
    return DirectionSet(a, std::move(vectors));
  }

  static constexpr int dim() { return Dim; }
  int size() const { return static_cast<int>(vectors_.size()); }
  double a() const { return a_; }
  const std::vector<Vec<Dim>>& vectors() const { return vectors_; }
  const Vec<Dim>& operator[](int i) const { return vectors_[static_cast<std::size_t>(i)]; }

  Eigen::MatrixXd gram() const {
    Eigen::MatrixXd g(size(), size());
    for (int i = 0; i < size(); ++i) {
      for (int j = 0; j < size(); ++j) g(i, j) = (*this)[i].dot((*this)[j]);
    }
    return g;
  }

 private:
  DirectionSet(double a, std::vector<Vec<Dim>> vectors) : a_(a), vectors_(std::move(vectors)) {}

  double a_;
  std::vector<Vec<Dim>> vectors_;
};

/// Canonical set of n directions: v1 on the first axis, v2 in the first
/// coordinate plane with nonnegative second coordinate, v3 with nonnegative
/// third coordinate.
///
/// The vectors are the columns of the upper-triangular square-root factor R of
/// the Gram matrix (G = R^T R, nonnegative diagonal), which is exactly the
/// canonical orientation. A rank-deficient set has a zero last pivot and is
/// zero-padded into R^Dim.
template <int Dim>
DirectionSet<Dim> build_directions(const GasParams& gas, int n) {
  if (n < 1) throw DomainError("number of waves must be at least 1");
  const int n_max = max_wave_count(gas, Dim);
  if (n > n_max) {
    throw InfeasibleError("gamma = " + std::to_string(gas.gamma()) + " admits at most " +
                          std::to_string(n_max) + " directions in R^" + std::to_string(Dim) +
                          ", requested " + std::to_string(n));
  }
  const double a = gas.a();
  const bool degenerate = std::abs(gram_min_eigenvalue(a, n)) <= kDegenerateTolerance;

  Eigen::MatrixXd r = Eigen::MatrixXd::Zero(n, n);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < j; ++i) {
      double s = -a;
      for (int l = 0; l < i; ++l) s -= r(l, i) * r(l, j);
      r(i, j) = s / r(i, i);
    }
    double pivot_sq = 1.0;
    for (int l = 0; l < j; ++l) pivot_sq -= r(l, j) * r(l, j);
    const bool last = j == n - 1;
    r(j, j) = (last && degenerate) ? 0.0 : std::sqrt(std::max(pivot_sq, 0.0));
  }

  std::vector<Vec<Dim>> vectors;
  vectors.reserve(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    Vec<Dim> v = Vec<Dim>::Zero();
    for (int i = 0; i < std::min(n, Dim); ++i) v[i] = r(i, j);
    // Dropping a pivot of order 1e-10 in the decimal-gamma case leaves the last
    // column slightly off the unit sphere.
    if (degenerate && j == n - 1) v.normalize();
    vectors.push_back(v);
  }
  return DirectionSet<Dim>::from_vectors(a, std::move(vectors));
}

/// max |v_i . v_j - G_ij| against the target Gram matrix (1 on the diagonal, -a off it).
template <int Dim>
double gram_residual(const DirectionSet<Dim>& ds) {
  double worst = 0.0;
  for (int i = 0; i < ds.size(); ++i) {
    for (int j = 0; j < ds.size(); ++j) {
      const double target = i == j ? 1.0 : -ds.a();
      worst = std::max(worst, std::abs(ds[i].dot(ds[j]) - target));
    }
  }
  return worst;
}

namespace detail {

template <int Dim>
Vec<Dim> orient_last_nonzero_positive(Vec<Dim> v) {
  for (int i = Dim - 1; i >= 0; --i) {
    if (std::abs(v[i]) > 1e-12) {
      if (v[i] < 0.0) v = -v;
      break;
    }
  }
  v.array() += 0.0;  // no negative zeros
  return v;
}

inline constexpr double kSpanTolerance = 1e-9;

}  // namespace detail

/// Unit vector orthogonal to every member when the set does not span R^Dim.
template <int Dim>
std::optional<Vec<Dim>> transverse_direction(const DirectionSet<Dim>& ds) {
  const Vec<Dim> v1 = ds[0].normalized();
  if constexpr (Dim == 2) {
    for (int k = 1; k < ds.size(); ++k) {
      const double cross = v1[0] * ds[k][1] - v1[1] * ds[k][0];
      if (std::abs(cross) > detail::kSpanTolerance) return std::nullopt;
    }
    return detail::orient_last_nonzero_positive<2>(Vec<2>(-v1[1], v1[0]));
  } else {
    for (int k = 1; k < ds.size(); ++k) {
      const Vec<3> normal = v1.cross(ds[k]);
      if (normal.norm() <= detail::kSpanTolerance) continue;
      const Vec<3> n = normal.normalized();
      for (int m = 1; m < ds.size(); ++m) {
        if (std::abs(n.dot(ds[m])) > detail::kSpanTolerance) return std::nullopt;
      }
      return detail::orient_last_nonzero_positive<3>(n);
    }
    // All members parallel: cross with the axis least aligned with v1.
    int axis = 0;
    for (int i = 1; i < 3; ++i) {
      if (std::abs(v1[i]) < std::abs(v1[axis])) axis = i;
    }
    const Vec<3> n = v1.cross(Vec<3>::Unit(axis)).normalized();
    return detail::orient_last_nonzero_positive<3>(n);
  }
}

}  // namespace eulerwave
