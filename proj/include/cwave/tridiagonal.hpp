#pragma once

// Thomas algorithm for tridiagonal systems.
//
//   diag_0  sup_0                        x_0     rhs_0
//   sub_1   diag_1  sup_1                x_1     rhs_1
//           ...     ...     ...       *  ...  =  ...
//                   sub_n-1 diag_n-1     x_n-1   rhs_n-1
//
// sub_0 and sup_n-1 are ignored. No pivoting; intended for diagonally
// dominant systems.

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include <Eigen/Core>

#include "cwave/error.hpp"

namespace cwave {

using Index = Eigen::Index;

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <typename Scalar>
Vector<Scalar> thomas_solve(const Eigen::Ref<const Vector<Scalar>>& sub,
                            const Eigen::Ref<const Vector<Scalar>>& diag,
                            const Eigen::Ref<const Vector<Scalar>>& sup,
                            const Eigen::Ref<const Vector<Scalar>>& rhs) {
  const Index n = diag.size();
  require(sub.size() == n && sup.size() == n && rhs.size() == n,
          "tridiagonal arrays must have equal length");
  Vector<Scalar> x(n);
  if (n == 0) return x;

  Scalar scale = diag.cwiseAbs().maxCoeff();
  if (n > 1) scale = std::max({scale, sub.tail(n - 1).cwiseAbs().maxCoeff(),
                               sup.head(n - 1).cwiseAbs().maxCoeff()});
  const Scalar tiny = scale * Scalar(n) * std::numeric_limits<Scalar>::epsilon();

  Vector<Scalar> c_star(n);
  Scalar m = diag[0];
  if (!(std::abs(m) > tiny)) fail("singular tridiagonal system");
  c_star[0] = sup[0] / m;
  x[0] = rhs[0] / m;
  for (Index i = 1; i < n; ++i) {
    m = diag[i] - sub[i] * c_star[i - 1];
    if (!(std::abs(m) > tiny)) fail("singular tridiagonal system");
    c_star[i] = sup[i] / m;
    x[i] = (rhs[i] - sub[i] * x[i - 1]) / m;
  }
  for (Index i = n - 2; i >= 0; --i) x[i] -= c_star[i] * x[i + 1];
  return x;
}

/// Precomputed forward-elimination coefficients for the constant symmetric
/// Toeplitz system with unit diagonal and off-diagonal `off`. Solves in place.
template <typename Scalar>
class ToeplitzTridiagonal {
 public:
  ToeplitzTridiagonal() = default;
  ToeplitzTridiagonal(Index n, Scalar off) : off_(off), c_star_(n), inv_m_(n) {
    Scalar m = 1;
    for (Index i = 0; i < n; ++i) {
      if (i > 0) m = Scalar(1) - off * c_star_[i - 1];
      if (!(std::abs(m) > std::numeric_limits<Scalar>::epsilon()))
        fail("singular tridiagonal system");
      inv_m_[i] = Scalar(1) / m;
      c_star_[i] = off * inv_m_[i];
    }
  }

  Index size() const { return static_cast<Index>(inv_m_.size()); }

  /// Overwrites rhs[0..n) with the solution. `rhs` may be strided.
  template <typename Accessor>
  void solve_in_place(Accessor&& rhs) const {
    const Index n = size();
    rhs(0) *= inv_m_[0];
    for (Index i = 1; i < n; ++i) rhs(i) = (rhs(i) - off_ * rhs(i - 1)) * inv_m_[i];
    for (Index i = n - 2; i >= 0; --i) rhs(i) -= c_star_[i] * rhs(i + 1);
  }

  void solve_in_place(Scalar* rhs) const {
    solve_in_place([rhs](Index i) -> Scalar& { return rhs[i]; });
  }

 private:
  Scalar off_{0};
  std::vector<Scalar> c_star_;
  std::vector<Scalar> inv_m_;
};

}  // namespace cwave
