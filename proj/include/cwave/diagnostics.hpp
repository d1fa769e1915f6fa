#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>
#include <utility>
#include <vector>

#include "cwave/compact.hpp"
#include "cwave/error.hpp"
#include "cwave/grid.hpp"

namespace cwave {

/// max over interior nodes of |numeric - exact|.
template <typename Scalar>
Scalar max_norm_error(const Field<Scalar>& numeric, const Field<Scalar>& exact) {
  require(numeric.grid() == exact.grid(), "grid mismatch");
  Scalar e = 0;
  numeric.for_each_interior(
      [&](int i, int j, int k) { e = std::max(e, std::abs(numeric(i, j, k) - exact(i, j, k))); });
  return e;
}

/// log(E1/E2) / log(h1/h2).
template <typename Scalar>
Scalar convergence_order(Scalar e1, Scalar h1, Scalar e2, Scalar h2) {
  if (!(e1 > 0) || !(e2 > 0)) fail("invalid error pair");
  require(h1 > 0 && h2 > 0 && h1 != h2, "invalid spacing pair");
  return std::log(e1 / e2) / std::log(h1 / h2);
}

/// Particle velocity, one component per active axis.
template <typename Scalar = double>
struct ParticleVelocity {
  std::vector<Field<Scalar>> v;

  static ParticleVelocity zero(const CartesianGrid<Scalar>& g) {
    return {std::vector<Field<Scalar>>(g.dims(), Field<Scalar>(g))};
  }

  const Field<Scalar>& x() const { return v.at(0); }
  const Field<Scalar>& y() const { return v.at(1); }
};

/// Crank-Nicolson step of rho v_t = -grad u:
///   v^{n+1} = v^n - tau / (2 rho) (grad u^n + grad u^{n+1}).
/// Gradients use the compact first derivative along each axis.
template <typename Scalar>
void particle_velocity_update(ParticleVelocity<Scalar>& vel, const Field<Scalar>& u_n,
                              const Field<Scalar>& u_np1, const Field<Scalar>& rho, Scalar tau,
                              const CompactOperator<Scalar>& op) {
  const auto& g = op.grid();
  require(u_n.grid() == g && u_np1.grid() == g && rho.grid() == g, "grid mismatch");
  require(static_cast<int>(vel.v.size()) == g.dims(), "velocity component count mismatch");
  Field<Scalar> gn(g), gn1(g);
  for (int a = 0; a < g.dims(); ++a) {
    op.gradient(u_n, a, gn);
    op.gradient(u_np1, a, gn1);
    vel.v[a].values() -= tau / (Scalar(2) * rho.values()) * (gn.values() + gn1.values());
  }
}

template <typename Scalar>
ParticleVelocity<Scalar> particle_velocity_update(ParticleVelocity<Scalar> vel,
                                                  const Field<Scalar>& u_n,
                                                  const Field<Scalar>& u_np1,
                                                  const Field<Scalar>& rho, Scalar tau) {
  particle_velocity_update(vel, u_n, u_np1, rho, tau, CompactOperator<Scalar>(u_n.grid()));
  return vel;
}

/// Axis-aligned integration region. Inactive axes are ignored.
template <typename Scalar = double>
struct EnergyRegion {
  std::array<Scalar, 3> min{};
  std::array<Scalar, 3> max{};

  static EnergyRegion whole(const CartesianGrid<Scalar>& g) {
    EnergyRegion r;
    for (int a = 0; a < g.dims(); ++a) {
      r.min[a] = g.axis(a).min;
      r.max[a] = g.axis(a).max;
    }
    return r;
  }
};

/// E = integral over the region of rho/2 |v|^2 + u^2 / (2 rho c^2), midpoint
/// rule on node-centred cells clipped to the region.
template <typename Scalar>
Scalar acoustic_energy(const Field<Scalar>& u, const ParticleVelocity<Scalar>& vel,
                       const MediaModel<Scalar>& model, const EnergyRegion<Scalar>& region) {
  const auto& g = u.grid();
  require(model.grid() == g, "grid mismatch");
  require(static_cast<int>(vel.v.size()) == g.dims(), "velocity component count mismatch");
  const int dims = g.dims();
  std::array<std::vector<Scalar>, 3> weights;
  for (int a = 0; a < 3; ++a) {
    weights[a].assign(g.stored(a), Scalar(1));
    if (a >= dims) continue;
    const auto& ax = g.axis(a);
    for (int i = 0; i < ax.stored(); ++i) {
      const Scalar x = ax.coord(i);
      const Scalar lo = std::max(x - ax.h / 2, std::max(region.min[a], ax.min));
      const Scalar hi = std::min(x + ax.h / 2, std::min(region.max[a], ax.max));
      weights[a][i] = std::max(hi - lo, Scalar(0));
    }
  }
  Scalar e = 0;
  u.for_each([&](int i, int j, int k) {
    const Scalar w = weights[0][i] * weights[1][j] * weights[2][k];
    if (w == 0) return;
    const Index idx = g.index(i, j, k);
    const Scalar rho = model.rho.values()[idx];
    const Scalar c = model.c.values()[idx];
    Scalar v2 = 0;
    for (const auto& comp : vel.v) v2 += comp.values()[idx] * comp.values()[idx];
    const Scalar uu = u.values()[idx];
    e += w * (rho / 2 * v2 + uu * uu / (2 * rho * c * c));
  });
  return e;
}

template <typename Scalar = double>
class EnergyTrace {
 public:
  void push(Scalar t, Scalar e) {
    require(samples_.empty() || t > samples_.back().first, "energy samples must advance in time");
    require(e >= 0 && std::isfinite(e), "energy must be finite and non-negative");
    samples_.emplace_back(t, e);
  }

  const std::vector<std::pair<Scalar, Scalar>>& samples() const { return samples_; }
  bool empty() const { return samples_.empty(); }
  std::size_t size() const { return samples_.size(); }

  Scalar peak() const {
    Scalar p = 0;
    for (const auto& s : samples_) p = std::max(p, s.second);
    return p;
  }

  /// "t,E" header, one sample per line, 17 significant digits.
  void write_csv(std::ostream& os) const {
    const auto old = os.precision();
    os << "t,E\n" << std::setprecision(17);
    for (const auto& [t, e] : samples_) os << t << ',' << e << '\n';
    os.precision(old);
  }

 private:
  std::vector<std::pair<Scalar, Scalar>> samples_;
};

}  // namespace cwave
