#pragma once

// Explicit leapfrog integration of
//   u_tt = rho c^2 (div((1/rho) grad u) + s)
// with a Taylor back-step for u^{-1}.

#include <cmath>
#include <string>
#include <utility>

#include "cwave/compact.hpp"
#include "cwave/error.hpp"
#include "cwave/grid.hpp"
#include "cwave/source.hpp"

namespace cwave {

template <typename Scalar = double>
struct WavefieldState {
  Field<Scalar> u_prev;  // level n - 1
  Field<Scalar> u_curr;  // level n
  int n{0};
  Scalar tau{0};

  Scalar time() const { return Scalar(n) * tau; }
};

/// Fires on any non-finite value or |u| above `limit`.
template <typename Scalar>
void check_stability(const Field<Scalar>& u, int step, Scalar limit = Scalar(1e12)) {
  const auto& v = u.values();
  if (!v.allFinite() || v.abs().maxCoeff() > limit)
    throw Error(ErrorKind::Instability, "instability detected at step " + std::to_string(step));
}

template <typename Scalar = double>
class LeapfrogStepper {
 public:
  LeapfrogStepper(MediaModel<Scalar> model, BoundarySpec<Scalar> bc, SourceSpec<Scalar> src,
                  Scalar tau)
      : model_(std::move(model)), bc_(std::move(bc)), src_(std::move(src)), tau_(tau) {
    require(tau > 0, "time step must be positive");
    model_.validate();
    op_ = CompactOperator<Scalar>(model_.grid());
    stiffness_ = model_.stiffness();
    work_ = Field<Scalar>(model_.grid());
  }

  const MediaModel<Scalar>& model() const { return model_; }
  const BoundarySpec<Scalar>& boundary() const { return bc_; }
  const SourceSpec<Scalar>& source() const { return src_; }
  const CompactOperator<Scalar>& op() const { return op_; }
  Scalar tau() const { return tau_; }

  /// u^{-1} = a - tau b + tau^2/2 k (L a + s^0) - tau^3/6 k (L b + s_t^0),
  /// k = rho c^2, L the compact divergence operator.
  Field<Scalar> back_step(const InitialConditions<Scalar>& ic) {
    const auto& g = model_.grid();
    require(ic.alpha.grid() == g && ic.beta.grid() == g, "initial conditions grid mismatch");
    Field<Scalar> la(g), lb(g);
    op_.divergence(ic.alpha, model_.rho, la);
    op_.divergence(ic.beta, model_.rho, lb);
    src_.add_to(la, Scalar(0));
    src_.add_dt_to(lb, Scalar(0), tau_ / Scalar(100));

    Field<Scalar> u(g);
    const Scalar t2 = tau_ * tau_ / Scalar(2);
    const Scalar t3 = tau_ * tau_ * tau_ / Scalar(6);
    u.values() = ic.alpha.values() - tau_ * ic.beta.values() +
                 stiffness_.values() * (t2 * la.values() - t3 * lb.values());
    bc_.apply(u, -tau_);
    return u;
  }

  WavefieldState<Scalar> initial_state(const InitialConditions<Scalar>& ic) {
    WavefieldState<Scalar> s;
    s.u_prev = back_step(ic);
    s.u_curr = ic.alpha;
    bc_.apply(s.u_curr, Scalar(0));
    s.n = 0;
    s.tau = tau_;
    return s;
  }

  /// Advances `state` one level in place.
  void step(WavefieldState<Scalar>& state) {
    const Scalar t = state.time();
    op_.divergence(state.u_curr, model_.rho, work_);
    src_.add_to(work_, t);
    // u_prev becomes u^{n+1}; boundary values are overwritten below.
    state.u_prev.values() = tau_ * tau_ * stiffness_.values() * work_.values() +
                            Scalar(2) * state.u_curr.values() - state.u_prev.values();
    bc_.apply(state.u_prev, t + tau_);
    std::swap(state.u_prev, state.u_curr);
    ++state.n;
    check_stability(state.u_curr, state.n);
  }

 private:
  MediaModel<Scalar> model_;
  BoundarySpec<Scalar> bc_;
  SourceSpec<Scalar> src_;
  Scalar tau_;
  CompactOperator<Scalar> op_{};
  Field<Scalar> stiffness_{};
  Field<Scalar> work_{};
};

template <typename Scalar>
Field<Scalar> initial_back_step(const InitialConditions<Scalar>& ic,
                                const MediaModel<Scalar>& model, const SourceSpec<Scalar>& src,
                                const BoundarySpec<Scalar>& bc, Scalar tau) {
  return LeapfrogStepper<Scalar>(model, bc, src, tau).back_step(ic);
}

template <typename Scalar>
WavefieldState<Scalar> leapfrog_step(WavefieldState<Scalar> state,
                                     const MediaModel<Scalar>& model,
                                     const SourceSpec<Scalar>& src,
                                     const BoundarySpec<Scalar>& bc) {
  LeapfrogStepper<Scalar>(model, bc, src, state.tau).step(state);
  return state;
}

}  // namespace cwave
