#pragma once

// Grid geometry, field storage and media containers.
//
// A grid with N interior points per axis stores N + 2 points per axis: the two
// outermost layers carry Dirichlet data. Storage is x-fastest, then y, then z.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <utility>

#include <Eigen/Core>

#include "cwave/error.hpp"

namespace cwave {

using Index = Eigen::Index;

template <typename Scalar>
struct Axis {
  Scalar min{0};
  Scalar max{0};
  int n{0};  // interior count
  Scalar h{0};

  int stored() const { return n + 2; }
  Scalar coord(int i) const { return min + Scalar(i) * h; }

  bool operator==(const Axis&) const = default;
};

template <typename Scalar = double>
class CartesianGrid {
 public:
  using Point = std::array<Scalar, 3>;

  CartesianGrid() = default;

  /// Builds a 2D or 3D grid from per-axis [min, max] extents and interior
  /// counts. Spacing is (max - min) / (N + 1).
  static CartesianGrid build(std::span<const std::pair<Scalar, Scalar>> extents,
                             std::span<const int> counts) {
    require(extents.size() == counts.size(), "extent/count arity mismatch");
    require(extents.size() == 2 || extents.size() == 3,
            "grid must be 2D or 3D");
    CartesianGrid g;
    g.dims_ = static_cast<int>(extents.size());
    for (int a = 0; a < g.dims_; ++a) {
      const auto [lo, hi] = extents[a];
      if (!(hi > lo) || !std::isfinite(lo) || !std::isfinite(hi))
        fail("empty axis");
      if (counts[a] < 5) fail("grid too small for 4th-order closure");
      Axis<Scalar>& ax = g.axes_[a];
      ax.min = lo;
      ax.max = hi;
      ax.n = counts[a];
      ax.h = (hi - lo) / Scalar(counts[a] + 1);
    }
    return g;
  }

  static CartesianGrid build(std::initializer_list<std::pair<Scalar, Scalar>> extents,
                             std::initializer_list<int> counts) {
    return build(std::span<const std::pair<Scalar, Scalar>>(extents.begin(), extents.size()),
                 std::span<const int>(counts.begin(), counts.size()));
  }

  /// Grid from explicit axes, as read back from files. Only requires one
  /// interior point per axis; the compact operators check their own minimum.
  static CartesianGrid from_axes(std::span<const Axis<Scalar>> axes) {
    require(axes.size() == 2 || axes.size() == 3, "grid must be 2D or 3D");
    CartesianGrid g;
    g.dims_ = static_cast<int>(axes.size());
    for (int a = 0; a < g.dims_; ++a) {
      const auto& ax = axes[a];
      if (!(ax.h > 0) || !std::isfinite(ax.h) || !std::isfinite(ax.min) || !(ax.max > ax.min))
        fail("empty axis");
      require(ax.n >= 1, "grid needs at least one interior point per axis");
      g.axes_[a] = ax;
    }
    return g;
  }

  /// Grid whose stored nodes start at `origin` with spacing `h`; `nodes`
  /// counts stored points per axis, boundary included.
  static CartesianGrid from_nodes(std::span<const Scalar> origin, std::span<const Scalar> h,
                                  std::span<const int> nodes) {
    require(origin.size() == nodes.size() && h.size() == nodes.size(),
            "origin/spacing/count arity mismatch");
    std::array<Axis<Scalar>, 3> axes{};
    for (std::size_t a = 0; a < nodes.size() && a < 3; ++a) {
      require(nodes[a] >= 3, "grid needs at least one interior point per axis");
      axes[a] = {origin[a], origin[a] + Scalar(nodes[a] - 1) * h[a], nodes[a] - 2, h[a]};
    }
    return from_axes(std::span<const Axis<Scalar>>(axes.data(), std::min<std::size_t>(nodes.size(), 3)));
  }

  int dims() const { return dims_; }
  const Axis<Scalar>& axis(int a) const { return axes_[a]; }
  Scalar h(int a) const { return axes_[a].h; }
  int n(int a) const { return axes_[a].n; }

  /// Stored points along an axis; an inactive z axis stores one plane.
  int stored(int a) const { return a < dims_ ? axes_[a].stored() : 1; }

  Index stride(int a) const {
    Index s = 1;
    for (int b = 0; b < a; ++b) s *= stored(b);
    return s;
  }

  Index size() const { return Index(stored(0)) * stored(1) * stored(2); }

  Index index(int i, int j, int k = 0) const {
    return (Index(k) * stored(1) + j) * stored(0) + i;
  }

  std::array<int, 3> unravel(Index flat) const {
    const int i = static_cast<int>(flat % stored(0));
    flat /= stored(0);
    const int j = static_cast<int>(flat % stored(1));
    const int k = static_cast<int>(flat / stored(1));
    return {i, j, k};
  }

  Point point(int i, int j, int k = 0) const {
    return {axes_[0].coord(i), axes_[1].coord(j),
            dims_ == 3 ? axes_[2].coord(k) : Scalar(0)};
  }

  bool is_interior(int i, int j, int k = 0) const {
    const auto in = [&](int a, int v) {
      return a >= dims_ || (v >= 1 && v <= axes_[a].n);
    };
    return in(0, i) && in(1, j) && in(2, k);
  }

  /// Product of the active spacings (cell volume or area).
  Scalar cell_measure() const {
    Scalar m = 1;
    for (int a = 0; a < dims_; ++a) m *= axes_[a].h;
    return m;
  }

  Scalar min_spacing() const {
    Scalar m = axes_[0].h;
    for (int a = 1; a < dims_; ++a) m = std::min(m, axes_[a].h);
    return m;
  }

  bool uniform_spacing(Scalar rel_tol = Scalar(1e-12)) const {
    for (int a = 1; a < dims_; ++a)
      if (std::abs(axes_[a].h - axes_[0].h) > rel_tol * axes_[0].h) return false;
    return true;
  }

  bool operator==(const CartesianGrid&) const = default;

 private:
  int dims_{0};
  std::array<Axis<Scalar>, 3> axes_{};
};

template <typename Scalar = double>
class Field {
 public:
  using Grid = CartesianGrid<Scalar>;
  using Storage = Eigen::Array<Scalar, Eigen::Dynamic, 1>;

  Field() = default;
  explicit Field(const Grid& grid, Scalar fill = Scalar(0))
      : grid_(grid), values_(Storage::Constant(grid.size(), fill)) {}

  const Grid& grid() const { return grid_; }
  Storage& values() { return values_; }
  const Storage& values() const { return values_; }
  Scalar* data() { return values_.data(); }
  const Scalar* data() const { return values_.data(); }
  Index size() const { return values_.size(); }

  Scalar& operator()(int i, int j, int k = 0) { return values_[grid_.index(i, j, k)]; }
  Scalar operator()(int i, int j, int k = 0) const { return values_[grid_.index(i, j, k)]; }

  bool all_finite() const { return values_.allFinite(); }

  /// Max |value| over the interior nodes.
  Scalar interior_max_abs() const {
    Scalar m = 0;
    for_each_interior([&](int i, int j, int k) { m = std::max(m, std::abs((*this)(i, j, k))); });
    return m;
  }

  template <typename Fn>
  void for_each_interior(Fn&& fn) const {
    const int k0 = grid_.dims() == 3 ? 1 : 0;
    const int k1 = grid_.dims() == 3 ? grid_.n(2) : 0;
    for (int k = k0; k <= k1; ++k)
      for (int j = 1; j <= grid_.n(1); ++j)
        for (int i = 1; i <= grid_.n(0); ++i) fn(i, j, k);
  }

  template <typename Fn>
  void for_each(Fn&& fn) const {
    for (int k = 0; k < grid_.stored(2); ++k)
      for (int j = 0; j < grid_.stored(1); ++j)
        for (int i = 0; i < grid_.stored(0); ++i) fn(i, j, k);
  }

 private:
  Grid grid_{};
  Storage values_{};
};

using ScalarField = Field<double>;
using Grid = CartesianGrid<double>;

/// Materializes fn(x, y, z) on every stored node (z = 0 in 2D).
template <typename Scalar, typename Fn>
Field<Scalar> sample(Fn&& fn, const CartesianGrid<Scalar>& grid) {
  Field<Scalar> f(grid);
  f.for_each([&](int i, int j, int k) {
    const auto p = grid.point(i, j, k);
    const Scalar v = fn(p[0], p[1], p[2]);
    if (!std::isfinite(v)) fail("non-finite sample");
    f(i, j, k) = v;
  });
  return f;
}

template <typename Scalar = double>
struct MediaModel {
  Field<Scalar> rho;  // density
  Field<Scalar> c;    // velocity

  const CartesianGrid<Scalar>& grid() const { return rho.grid(); }

  void validate() const {
    require(rho.grid() == c.grid(), "rho and c must share a grid");
    require(rho.all_finite() && c.all_finite(), "invalid media model");
    require((rho.values() > 0).all() && (c.values() > 0).all(),
            "invalid media model");
  }

  /// rho * c^2 at every node, the factor multiplying the spatial operator.
  Field<Scalar> stiffness() const {
    Field<Scalar> k(grid());
    k.values() = rho.values() * c.values().square();
    return k;
  }
};

template <typename Scalar = double>
struct InitialConditions {
  Field<Scalar> alpha;  // u(0)
  Field<Scalar> beta;   // u_t(0)
};

/// Dirichlet data per face. An empty evaluator means u = 0 on that face.
/// Face order: x_min, x_max, y_min, y_max, z_min, z_max. Each evaluator takes
/// (t, a, b) where (a, b) are the in-face coordinates in axis order.
template <typename Scalar = double>
struct BoundarySpec {
  using FaceFn = std::function<Scalar(Scalar, Scalar, Scalar)>;
  std::array<FaceFn, 6> faces{};

  static BoundarySpec zero() { return {}; }

  /// Uses an analytic solution u(t, x, y, z) on every face; takes precedence
  /// over the per-face evaluators.
  template <typename Fn>
  static BoundarySpec from_solution(Fn fn) {
    BoundarySpec bc;
    bc.solution_ = std::function<Scalar(Scalar, Scalar, Scalar, Scalar)>(fn);
    return bc;
  }

  bool is_zero() const {
    if (solution_) return false;
    for (const auto& f : faces)
      if (f) return false;
    return true;
  }

  /// Overwrites the boundary layer of `u` with the data at time t.
  void apply(Field<Scalar>& u, Scalar t) const {
    const auto& g = u.grid();
    const int dims = g.dims();
    for (int a = 0; a < dims; ++a) {
      for (int side = 0; side < 2; ++side) {
        const int face = 2 * a + side;
        const int fixed = side == 0 ? 0 : g.n(a) + 1;
        const int b0 = a == 0 ? 1 : 0;        // first in-face axis
        const int b1 = a == 2 ? 1 : 2;        // second in-face axis
        const int nb0 = g.stored(b0);
        const int nb1 = b1 < dims ? g.stored(b1) : 1;
        for (int q = 0; q < nb1; ++q) {
          for (int p = 0; p < nb0; ++p) {
            std::array<int, 3> idx{0, 0, 0};
            idx[a] = fixed;
            idx[b0] = p;
            if (b1 < 3) idx[b1] = b1 < dims ? q : 0;
            const auto x = g.point(idx[0], idx[1], idx[2]);
            Scalar v = 0;
            if (solution_) {
              v = solution_(t, x[0], x[1], x[2]);
            } else if (faces[face]) {
              v = faces[face](t, x[b0], b1 < dims ? x[b1] : Scalar(0));
            }
            u(idx[0], idx[1], idx[2]) = v;
          }
        }
      }
    }
  }

 private:
  std::function<Scalar(Scalar, Scalar, Scalar, Scalar)> solution_{};
};

}  // namespace cwave
