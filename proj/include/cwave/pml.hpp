#pragma once

// Two-dimensional perfectly matched layer.
//
// Direct form:
//   (1/(rho c^2)) (u_tt + sigma u_t + zeta u) - div((1/rho)(v + grad u)) = f
//   v_t + H v + J grad u = g
// with sigma = sx + sy, zeta = sx sy, H = diag(sx, sy), J = diag(sx - sy, sy - sx).
// In 2D the third-order terms of the 3D system vanish.
//
// Substituted form, u = e^{-sigma t / 2} w:
//   (1/(rho c^2)) (e w_tt + (zeta - sigma^2/4) e w) - div((1/rho)(v + grad(e w))) = f
// where e = e^{-sigma t / 2}. No first time derivative remains, so plain
// leapfrog applies to w.
//
// g is zero for physical runs; manufactured-solution runs supply it.

#include <array>
#include <cmath>
#include <functional>
#include <optional>
#include <utility>

#include "cwave/compact.hpp"
#include "cwave/error.hpp"
#include "cwave/grid.hpp"
#include "cwave/source.hpp"
#include "cwave/stepper.hpp"

namespace cwave {

enum class DampingProfile { Constant, Linear, Quadratic, InverseDistance };
enum class PmlFormulation { Direct, Substituted };

template <typename Scalar = double>
struct PmlLayout {
  std::array<Scalar, 2> inner_min{};  // the undamped region
  std::array<Scalar, 2> inner_max{};
  std::array<Scalar, 4> width{};      // x_min, x_max, y_min, y_max sides
  Scalar sigma_max{0};
  DampingProfile profile{DampingProfile::InverseDistance};

  /// Layout whose layers of `w` surround [x0, x1] x [y0, y1] on all sides.
  static PmlLayout around(Scalar x0, Scalar x1, Scalar y0, Scalar y1, Scalar w, Scalar sigma_max,
                          DampingProfile profile = DampingProfile::InverseDistance) {
    return {{x0, y0}, {x1, y1}, {w, w, w, w}, sigma_max, profile};
  }

  std::array<Scalar, 2> outer_min() const { return {inner_min[0] - width[0], inner_min[1] - width[2]}; }
  std::array<Scalar, 2> outer_max() const { return {inner_max[0] + width[1], inner_max[1] + width[3]}; }

  bool contains_inner(Scalar x, Scalar y, Scalar tol = Scalar(1e-12)) const {
    return x >= inner_min[0] - tol && x <= inner_max[0] + tol && y >= inner_min[1] - tol &&
           y <= inner_max[1] + tol;
  }
};

/// sigma_x (varies along x) and sigma_y (varies along y) plus the per-node
/// combinations the PML equations use.
template <typename Scalar = double>
struct DampingField {
  Field<Scalar> sigma_x;
  Field<Scalar> sigma_y;
  Field<Scalar> sigma;  // sx + sy
  Field<Scalar> zeta;   // sx * sy

  static DampingField from(Field<Scalar> sx, Field<Scalar> sy) {
    require(sx.grid() == sy.grid(), "damping grids differ");
    require(sx.grid().dims() == 2, "PML damping is two-dimensional");
    DampingField d{std::move(sx), std::move(sy), {}, {}};
    d.sigma = Field<Scalar>(d.sigma_x.grid());
    d.zeta = Field<Scalar>(d.sigma_x.grid());
    d.sigma.values() = d.sigma_x.values() + d.sigma_y.values();
    d.zeta.values() = d.sigma_x.values() * d.sigma_y.values();
    return d;
  }

  static DampingField zero(const CartesianGrid<Scalar>& g) {
    return from(Field<Scalar>(g), Field<Scalar>(g));
  }

  /// Diagonal of H for axis a.
  const Field<Scalar>& h_diag(int a) const { return a == 0 ? sigma_x : sigma_y; }

  /// Diagonal entry of J for axis a at a flat index.
  Scalar j_diag(int a, Index idx) const {
    const Scalar d = sigma_x.values()[idx] - sigma_y.values()[idx];
    return a == 0 ? d : -d;
  }

  bool is_zero() const { return (sigma_x.values() == 0).all() && (sigma_y.values() == 0).all(); }
};

namespace detail {

template <typename Scalar>
Scalar damping_value(const PmlLayout<Scalar>& layout, Scalar dist, Scalar width, Scalar h) {
  if (dist <= Scalar(1e-12) * h) return 0;
  switch (layout.profile) {
    case DampingProfile::Constant:
      return layout.sigma_max;
    case DampingProfile::Linear:
      return layout.sigma_max * std::min(dist / width, Scalar(1));
    case DampingProfile::Quadratic: {
      const Scalar r = std::min(dist / width, Scalar(1));
      return layout.sigma_max * r * r;
    }
    case DampingProfile::InverseDistance:
      return layout.sigma_max * h / std::max(dist, h);
  }
  return 0;
}

}  // namespace detail

template <typename Scalar>
DampingField<Scalar> damping_profile(const PmlLayout<Scalar>& layout,
                                     const CartesianGrid<Scalar>& grid) {
  require(grid.dims() == 2, "PML damping is two-dimensional");
  bool any_layer = false;
  for (int a = 0; a < 2; ++a) {
    require(layout.inner_max[a] > layout.inner_min[a], "empty PML interior region");
    for (int side = 0; side < 2; ++side) {
      const Scalar w = layout.width[2 * a + side];
      require(w >= 0, "negative PML width");
      if (w > 0 && w < Scalar(4) * grid.h(a) * (1 - Scalar(1e-9)))
        fail("PML layer narrower than four grid spacings");
      any_layer = any_layer || w > 0;
    }
  }
  if (!any_layer && layout.sigma_max != 0) fail("degenerate layer");
  Field<Scalar> sx(grid), sy(grid);
  sx.for_each([&](int i, int j, int k) {
    const auto p = grid.point(i, j, k);
    for (int a = 0; a < 2; ++a) {
      const Scalar lo = layout.inner_min[a] - p[a];
      const Scalar hi = p[a] - layout.inner_max[a];
      Scalar s = 0;
      if (lo > 0) s = detail::damping_value(layout, lo, layout.width[2 * a], grid.h(a));
      if (hi > 0) s = detail::damping_value(layout, hi, layout.width[2 * a + 1], grid.h(a));
      (a == 0 ? sx : sy)(i, j, k) = s;
    }
  });
  return DampingField<Scalar>::from(std::move(sx), std::move(sy));
}

template <typename Scalar = double>
struct PmlState2D {
  Field<Scalar> u_prev;  // u, or w in the substituted form
  Field<Scalar> u_curr;
  Field<Scalar> v_x;
  Field<Scalar> v_y;
  int n{0};
  Scalar tau{0};

  Scalar time() const { return Scalar(n) * tau; }
};

/// Right-hand side g of the auxiliary equation, per component: (t, x, y) -> value.
template <typename Scalar = double>
struct AuxForcing {
  std::function<Scalar(Scalar, Scalar, Scalar)> gx{};
  std::function<Scalar(Scalar, Scalar, Scalar)> gy{};

  bool empty() const { return !gx && !gy; }
};

template <typename Scalar = double>
class PmlStepper2D {
 public:
  PmlStepper2D(MediaModel<Scalar> model, DampingField<Scalar> damping, BoundarySpec<Scalar> bc,
               SourceSpec<Scalar> src, Scalar tau, PmlFormulation form,
               AuxForcing<Scalar> aux = {})
      : model_(std::move(model)),
        damping_(std::move(damping)),
        bc_(std::move(bc)),
        src_(std::move(src)),
        aux_(std::move(aux)),
        tau_(tau),
        form_(form) {
    require(tau > 0, "time step must be positive");
    model_.validate();
    const auto& g = model_.grid();
    require(g.dims() == 2, "PML stepping is two-dimensional");
    require(damping_.sigma_x.grid() == g, "damping grid does not match the model");
    op_ = CompactOperator<Scalar>(g);
    stiffness_ = model_.stiffness();
    for (auto* f : {&work_, &phys_, &phys_next_, &gx_, &gy_, &gx_next_, &gy_next_, &factor_})
      *f = Field<Scalar>(g);
  }

  PmlFormulation formulation() const { return form_; }
  const MediaModel<Scalar>& model() const { return model_; }
  const DampingField<Scalar>& damping() const { return damping_; }
  const CompactOperator<Scalar>& op() const { return op_; }
  Scalar tau() const { return tau_; }

  /// Builds (u^{-1}, u^0, v^0) from u(0), u_t(0) and v(0) by a third-order
  /// Taylor back-step. u_tt(0) and u_ttt(0) come from the discrete direct
  /// equation; the substituted form converts them through w = e^{sigma t/2} u.
  PmlState2D<Scalar> initial_state(const InitialConditions<Scalar>& ic,
                                   std::optional<std::array<Field<Scalar>, 2>> v0 = {}) {
    const auto& g = model_.grid();
    require(ic.alpha.grid() == g && ic.beta.grid() == g, "initial conditions grid mismatch");
    PmlState2D<Scalar> s;
    s.tau = tau_;
    s.n = 0;
    s.v_x = v0 ? (*v0)[0] : Field<Scalar>(g);
    s.v_y = v0 ? (*v0)[1] : Field<Scalar>(g);

    Field<Scalar> alpha = ic.alpha;
    bc_.apply(alpha, Scalar(0));
    const auto& sig = damping_.sigma.values();
    const auto& zeta = damping_.zeta.values();
    const auto& k = stiffness_.values();
    const auto& a = alpha.values();
    const auto& b = ic.beta.values();

    // u_tt = k (D(u, v) + f) - sigma u_t - zeta u
    divergence_with_aux(alpha, s.v_x, s.v_y, work_);
    src_.add_to(work_, Scalar(0));
    Field<Scalar> utt(g);
    utt.values() = k * work_.values() - sig * b - zeta * a;

    // u_ttt = k (D(u_t, v_t) + f_t) - sigma u_tt - zeta u_t, v_t = -H v - J grad u + g
    op_.gradient(alpha, 0, gx_);
    op_.gradient(alpha, 1, gy_);
    Field<Scalar> vtx = s.v_x, vty = s.v_y;
    vtx.values() = Scalar(0);
    vty.values() = Scalar(0);
    advance_aux_rate(vtx, 0, s.v_x, gx_);
    advance_aux_rate(vty, 1, s.v_y, gy_);
    divergence_with_aux(ic.beta, vtx, vty, work_);
    src_.add_dt_to(work_, Scalar(0), tau_ / Scalar(100));
    Field<Scalar> uttt(g);
    uttt.values() = k * work_.values() - sig * utt.values() - zeta * b;

    s.u_curr = alpha;  // w(0) = u(0)
    s.u_prev = Field<Scalar>(g);
    const Scalar t1 = tau_;
    const Scalar t2 = tau_ * tau_ / Scalar(2);
    const Scalar t3 = tau_ * tau_ * tau_ / Scalar(6);
    if (form_ == PmlFormulation::Direct) {
      s.u_prev.values() = a - t1 * b + t2 * utt.values() - t3 * uttt.values();
      bc_.apply(s.u_prev, -tau_);
    } else {
      const auto lam = Scalar(0.5) * sig;
      const auto& u2 = utt.values();
      const auto& u3 = uttt.values();
      s.u_prev.values() = a - t1 * (lam * a + b) +
                          t2 * (lam * lam * a + Scalar(2) * lam * b + u2) -
                          t3 * (lam * lam * lam * a + Scalar(3) * lam * lam * b +
                                Scalar(3) * lam * u2 + u3);
      apply_substituted_bc(s.u_prev, -tau_);
    }
    return s;
  }

  /// Physical pressure u at the state's current level.
  Field<Scalar> pressure(const PmlState2D<Scalar>& s) const {
    if (form_ == PmlFormulation::Direct) return s.u_curr;
    Field<Scalar> u(s.u_curr.grid());
    u.values() = substitution_factor(s.time()) * s.u_curr.values();
    return u;
  }

  void step(PmlState2D<Scalar>& s) {
    const Scalar t = s.time();
    const Scalar t1 = t + tau_;
    const auto& sig = damping_.sigma.values();
    const auto& zeta = damping_.zeta.values();
    const auto& k = stiffness_.values();
    const Scalar inv_t2 = Scalar(1) / (tau_ * tau_);

    // phys_ = u^n on the full grid.
    if (form_ == PmlFormulation::Direct) {
      phys_ = s.u_curr;
    } else {
      factor_.values() = substitution_factor(t);
      phys_.values() = factor_.values() * s.u_curr.values();
    }

    divergence_with_aux(phys_, s.v_x, s.v_y, work_);
    src_.add_to(work_, t);

    if (form_ == PmlFormulation::Direct) {
      const auto num = k * work_.values() - zeta * phys_.values() +
                       inv_t2 * (Scalar(2) * s.u_curr.values() - s.u_prev.values()) +
                       sig * s.u_prev.values() / (Scalar(2) * tau_);
      s.u_prev.values() = num / (inv_t2 + sig / (Scalar(2) * tau_));
      bc_.apply(s.u_prev, t1);
      phys_next_ = s.u_prev;
    } else {
      const auto rhs = k * work_.values() - (zeta - Scalar(0.25) * sig * sig) * phys_.values();
      s.u_prev.values() = Scalar(2) * s.u_curr.values() - s.u_prev.values() +
                          tau_ * tau_ * rhs / factor_.values();
      apply_substituted_bc(s.u_prev, t1);
      phys_next_.values() = substitution_factor(t1) * s.u_prev.values();
    }
    std::swap(s.u_prev, s.u_curr);

    // Auxiliary field, trapezoidal in time on both the damping term and the
    // gradient coupling.
    op_.gradient(phys_, 0, gx_);
    op_.gradient(phys_, 1, gy_);
    op_.gradient(phys_next_, 0, gx_next_);
    op_.gradient(phys_next_, 1, gy_next_);
    advance_aux(s.v_x, 0, gx_, gx_next_, t, t1);
    advance_aux(s.v_y, 1, gy_, gy_next_, t, t1);

    ++s.n;
    check_stability(s.u_curr, s.n);
  }

 private:
  Eigen::Array<Scalar, Eigen::Dynamic, 1> substitution_factor(Scalar t) const {
    return (Scalar(-0.5) * t * damping_.sigma.values()).exp();
  }

  void apply_substituted_bc(Field<Scalar>& w, Scalar t) const {
    bc_.apply(w, t);
    if (bc_.is_zero()) return;
    const auto e = substitution_factor(t);
    const auto& g = w.grid();
    w.for_each([&](int i, int j, int kk) {
      if (!g.is_interior(i, j, kk)) {
        const Index idx = g.index(i, j, kk);
        w.values()[idx] /= e[idx];
      }
    });
  }

  void divergence_with_aux(const Field<Scalar>& u, const Field<Scalar>& vx,
                           const Field<Scalar>& vy, Field<Scalar>& out) const {
    const std::array<const Field<Scalar>*, 2> extra{&vx, &vy};
    op_.divergence(u, model_.rho, out, extra);
  }

  void advance_aux(Field<Scalar>& v, int axis, const Field<Scalar>& grad_n,
                   const Field<Scalar>& grad_n1, Scalar t, Scalar t1) const {
    const auto& g = v.grid();
    const auto& hd = damping_.h_diag(axis).values();
    const Scalar half = tau_ / Scalar(2);
    const auto& forcing = axis == 0 ? aux_.gx : aux_.gy;
    v.for_each([&](int i, int j, int kk) {
      const Index idx = g.index(i, j, kk);
      const Scalar jd = damping_.j_diag(axis, idx);
      Scalar rhs = (Scalar(1) - half * hd[idx]) * v.values()[idx] -
                   half * jd * (grad_n.values()[idx] + grad_n1.values()[idx]);
      if (forcing) {
        const auto p = g.point(i, j, kk);
        rhs += half * (forcing(t, p[0], p[1]) + forcing(t1, p[0], p[1]));
      }
      v.values()[idx] = rhs / (Scalar(1) + half * hd[idx]);
    });
  }

  /// rate = -H v - J grad + g at t = 0.
  void advance_aux_rate(Field<Scalar>& rate, int axis, const Field<Scalar>& v,
                        const Field<Scalar>& grad) const {
    const auto& g = v.grid();
    const auto& hd = damping_.h_diag(axis).values();
    const auto& forcing = axis == 0 ? aux_.gx : aux_.gy;
    v.for_each([&](int i, int j, int kk) {
      const Index idx = g.index(i, j, kk);
      Scalar r = -hd[idx] * v.values()[idx] - damping_.j_diag(axis, idx) * grad.values()[idx];
      if (forcing) {
        const auto p = g.point(i, j, kk);
        r += forcing(Scalar(0), p[0], p[1]);
      }
      rate.values()[idx] = r;
    });
  }

  MediaModel<Scalar> model_;
  DampingField<Scalar> damping_;
  BoundarySpec<Scalar> bc_;
  SourceSpec<Scalar> src_;
  AuxForcing<Scalar> aux_;
  Scalar tau_;
  PmlFormulation form_;
  CompactOperator<Scalar> op_{};
  Field<Scalar> stiffness_{}, work_{}, phys_{}, phys_next_{}, gx_{}, gy_{}, gx_next_{},
      gy_next_{}, factor_{};
};

template <typename Scalar>
PmlState2D<Scalar> pml_step_direct(PmlState2D<Scalar> state, const MediaModel<Scalar>& model,
                                   const DampingField<Scalar>& damping,
                                   const SourceSpec<Scalar>& src, const BoundarySpec<Scalar>& bc,
                                   const AuxForcing<Scalar>& aux = {}) {
  PmlStepper2D<Scalar>(model, damping, bc, src, state.tau, PmlFormulation::Direct, aux).step(state);
  return state;
}

template <typename Scalar>
PmlState2D<Scalar> pml_step_substituted(PmlState2D<Scalar> state,
                                        const MediaModel<Scalar>& model,
                                        const DampingField<Scalar>& damping,
                                        const SourceSpec<Scalar>& forcing,
                                        const BoundarySpec<Scalar>& bc,
                                        const AuxForcing<Scalar>& aux = {}) {
  PmlStepper2D<Scalar>(model, damping, bc, forcing, state.tau, PmlFormulation::Substituted, aux)
      .step(state);
  return state;
}

}  // namespace cwave
