#include "cwave/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace cwave {

int RunConfig::steps() const { return static_cast<int>(std::lround(t_end / tau)); }

void RunConfig::validate() const {
  require(tau > 0 && std::isfinite(tau), "tau must be positive");
  require(t_end >= 0 && std::isfinite(t_end), "t_end must be non-negative");
  require(snapshot_every >= 1, "snapshot_every must be at least 1");
  if (pml) {
    require(problem.grid().dims() == 2, "PML runs are two-dimensional");
    require(problem.damping.has_value(), "PML run without a damping field");
  }
}

namespace {

bool want_frame(const RunConfig& cfg, int step, int last) {
  if (step == 0 || step == last) return cfg.snapshot_times.empty() || step == 0;
  if (cfg.snapshot_times.empty()) return step % cfg.snapshot_every == 0;
  return false;
}

std::vector<int> frame_steps(const RunConfig& cfg, int last) {
  std::vector<int> steps;
  for (double t : cfg.snapshot_times) {
    const int s = static_cast<int>(std::lround(t / cfg.tau));
    if (s >= 0 && s <= last) steps.push_back(s);
  }
  std::sort(steps.begin(), steps.end());
  steps.erase(std::unique(steps.begin(), steps.end()), steps.end());
  return steps;
}

EnergyRegion<double> default_region(const RunConfig& cfg) {
  if (cfg.energy_region) return *cfg.energy_region;
  const auto& g = cfg.problem.grid();
  auto r = EnergyRegion<double>::whole(g);
  if (cfg.problem.layout) {
    for (int a = 0; a < 2; ++a) {
      r.min[a] = cfg.problem.layout->inner_min[a];
      r.max[a] = cfg.problem.layout->inner_max[a];
    }
  }
  return r;
}

}  // namespace

SimulationResult run_simulation(const RunConfig& cfg, const FrameSink& sink) {
  cfg.validate();
  const Problem& p = cfg.problem;
  p.model.validate();

  SimulationResult res;
  res.cfl = cfl_threshold(p.model, cfg.tau);
  if (!res.cfl.pass && !cfg.cfl_override) {
    std::ostringstream os;
    os << "CFL violation: c_max sqrt(q_max/q_min) tau/h must be below " << res.cfl.threshold
       << " (tau/h = " << res.cfl.tau_over_h << ", limit " << res.cfl.tau_over_h_limit << ")";
    fail(os.str());
  }

  const int last = cfg.steps();
  const auto timed = frame_steps(cfg, last);
  const auto emit = [&](const ScalarField& u, int step) {
    const bool listed = std::binary_search(timed.begin(), timed.end(), step);
    if (!want_frame(cfg, step, last) && !listed) return;
    SnapshotFrame f{double(step) * cfg.tau, step, u};
    if (sink) {
      sink(f);
    } else {
      res.frames.push_back(std::move(f));
    }
  };

  const auto& g = p.grid();
  const CompactOperator<double> op(g);
  const auto region = default_region(cfg);
  auto velocity = ParticleVelocity<double>::zero(g);
  if (cfg.energy) res.energy.emplace();

  const auto record_energy = [&](const ScalarField& u, int step) {
    if (cfg.energy) res.energy->push(double(step) * cfg.tau, acoustic_energy(u, velocity, p.model, region));
  };

  if (cfg.pml) {
    PmlStepper2D<double> stepper(p.model, *p.damping, p.bc, p.source, cfg.tau, *cfg.pml, p.aux);
    auto state = stepper.initial_state(p.ic, p.v0);
    ScalarField u = stepper.pressure(state);
    emit(u, 0);
    record_energy(u, 0);
    for (int n = 0; n < last; ++n) {
      stepper.step(state);
      ScalarField next = stepper.pressure(state);
      if (cfg.energy) particle_velocity_update(velocity, u, next, p.model.rho, cfg.tau, op);
      u = std::move(next);
      emit(u, state.n);
      record_energy(u, state.n);
    }
    res.u = std::move(u);
    res.steps = state.n;
    res.t = state.time();
  } else {
    LeapfrogStepper<double> stepper(p.model, p.bc, p.source, cfg.tau);
    auto state = stepper.initial_state(p.ic);
    emit(state.u_curr, 0);
    record_energy(state.u_curr, 0);
    for (int n = 0; n < last; ++n) {
      stepper.step(state);
      // After the step u_prev holds level n and u_curr level n + 1.
      if (cfg.energy)
        particle_velocity_update(velocity, state.u_prev, state.u_curr, p.model.rho, cfg.tau, op);
      emit(state.u_curr, state.n);
      record_energy(state.u_curr, state.n);
    }
    res.u = state.u_curr;
    res.steps = state.n;
    res.t = state.time();
  }
  return res;
}

double final_error(const RunConfig& cfg, const SimulationResult& res) {
  require(static_cast<bool>(cfg.problem.exact), "problem has no analytic solution");
  const auto& exact = cfg.problem.exact;
  const double t = res.t;
  const auto ref = sample([&](double x, double y, double z) { return exact(t, x, y, z); },
                          res.u.grid());
  return max_norm_error(res.u, ref);
}

}  // namespace cwave
