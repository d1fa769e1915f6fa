#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <numbers>

#include "cwave/error.hpp"
#include "cwave/grid.hpp"

namespace cwave {

/// Ricker wavelet (1 - 2 pi^2 f^2 (t - d)^2) exp(-pi^2 f^2 (t - d)^2); peak 1 at t = d.
template <typename Scalar>
Scalar ricker(Scalar t, Scalar fp, Scalar delay) {
  const Scalar a = std::numbers::pi_v<Scalar> * std::numbers::pi_v<Scalar> * fp * fp *
                   (t - delay) * (t - delay);
  return (Scalar(1) - Scalar(2) * a) * std::exp(-a);
}

template <typename Scalar>
Scalar ricker_dt(Scalar t, Scalar fp, Scalar delay) {
  const Scalar pf2 = std::numbers::pi_v<Scalar> * std::numbers::pi_v<Scalar> * fp * fp;
  const Scalar a = pf2 * (t - delay) * (t - delay);
  const Scalar da = Scalar(2) * pf2 * (t - delay);
  return da * std::exp(-a) * (Scalar(2) * a - Scalar(3));
}

/// Nearest stored node to `location`; exact ties go to the lower index.
/// Fails unless that node is an interior node and the location lies strictly
/// inside the domain.
template <typename Scalar>
std::array<int, 3> nearest_interior_node(const CartesianGrid<Scalar>& grid,
                                         const std::array<Scalar, 3>& location) {
  std::array<int, 3> idx{0, 0, 0};
  for (int a = 0; a < grid.dims(); ++a) {
    const auto& ax = grid.axis(a);
    if (!(location[a] > ax.min && location[a] < ax.max)) fail("source outside interior");
    const Scalar r = (location[a] - ax.min) / ax.h;
    const int i = static_cast<int>(std::ceil(r - Scalar(0.5)));
    if (i < 1 || i > ax.n) fail("source outside interior");
    idx[a] = i;
  }
  return idx;
}

/// Adds amplitude / (cell measure) at the node nearest to `location`: a
/// discrete Dirac delta.
template <typename Scalar>
void inject_point_source(Field<Scalar>& target, const std::array<Scalar, 3>& location,
                         Scalar amplitude) {
  const auto& g = target.grid();
  const auto idx = nearest_interior_node(g, location);
  target(idx[0], idx[1], idx[2]) += amplitude / g.cell_measure();
}

enum class SourceKind { None, Analytic, PointRicker };

/// Right-hand side s(t, x) of the wave equation.
template <typename Scalar = double>
struct SourceSpec {
  using FieldFn = std::function<Scalar(Scalar, Scalar, Scalar, Scalar)>;  // (t, x, y, z)

  SourceKind kind{SourceKind::None};

  FieldFn field{};     // analytic
  FieldFn field_dt{};  // optional analytic time derivative

  Scalar fp{0};        // point Ricker
  Scalar delay{0};
  Scalar amplitude{1};
  std::array<Scalar, 3> location{};

  static SourceSpec none() { return {}; }

  static SourceSpec analytic(FieldFn f, FieldFn dt = {}) {
    SourceSpec s;
    s.kind = SourceKind::Analytic;
    s.field = std::move(f);
    s.field_dt = std::move(dt);
    return s;
  }

  static SourceSpec point_ricker(Scalar fp, Scalar delay, std::array<Scalar, 3> location,
                                 Scalar amplitude = 1) {
    require(fp > 0, "Ricker dominant frequency must be positive");
    require(delay >= 0, "Ricker delay must be non-negative");
    SourceSpec s;
    s.kind = SourceKind::PointRicker;
    s.fp = fp;
    s.delay = delay;
    s.location = location;
    s.amplitude = amplitude;
    return s;
  }

  /// target(interior) += scale * s(t). `fd_step` is used for a centered
  /// difference when a time derivative is requested and no analytic one exists.
  void add_to(Field<Scalar>& target, Scalar t, Scalar scale = 1) const {
    add_impl(target, t, scale, false, 0);
  }

  void add_dt_to(Field<Scalar>& target, Scalar t, Scalar fd_step, Scalar scale = 1) const {
    add_impl(target, t, scale, true, fd_step);
  }

 private:
  void add_impl(Field<Scalar>& target, Scalar t, Scalar scale, bool dt, Scalar step) const {
    switch (kind) {
      case SourceKind::None:
        return;
      case SourceKind::PointRicker: {
        const Scalar w = dt ? ricker_dt(t, fp, delay) : ricker(t, fp, delay);
        inject_point_source(target, location, scale * amplitude * w);
        return;
      }
      case SourceKind::Analytic: {
        const auto& g = target.grid();
        target.for_each_interior([&](int i, int j, int k) {
          const auto p = g.point(i, j, k);
          Scalar v;
          if (!dt) {
            v = field(t, p[0], p[1], p[2]);
          } else if (field_dt) {
            v = field_dt(t, p[0], p[1], p[2]);
          } else {
            v = (field(t + step, p[0], p[1], p[2]) - field(t - step, p[0], p[1], p[2])) /
                (Scalar(2) * step);
          }
          target(i, j, k) += scale * v;
        });
        return;
      }
    }
  }
};

}  // namespace cwave
