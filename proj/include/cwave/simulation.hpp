#pragma once

#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "cwave/diagnostics.hpp"
#include "cwave/grid.hpp"
#include "cwave/pml.hpp"
#include "cwave/source.hpp"
#include "cwave/stability.hpp"
#include "cwave/stepper.hpp"

namespace cwave {

using AnalyticFn = std::function<double(double, double, double, double)>;  // (t, x, y, z)

/// Everything that defines the continuous problem on a grid.
struct Problem {
  std::string name;
  MediaModel<double> model;
  InitialConditions<double> ic;
  BoundarySpec<double> bc;
  SourceSpec<double> source;
  AnalyticFn exact{};  // analytic solution, when known

  // PML runs (2D only).
  std::optional<DampingField<double>> damping;
  std::optional<PmlLayout<double>> layout;
  AuxForcing<double> aux{};
  std::optional<std::array<ScalarField, 2>> v0;

  const Grid& grid() const { return model.grid(); }
};

struct RunConfig {
  Problem problem;
  double tau{0};
  double t_end{0};
  std::optional<PmlFormulation> pml;  // set: PML stepping, requires problem.damping
  int snapshot_every{1};
  std::vector<double> snapshot_times;  // if non-empty, replaces snapshot_every
  bool energy{false};
  std::optional<EnergyRegion<double>> energy_region;  // default: PML interior or whole grid
  bool cfl_override{false};
  std::filesystem::path output_dir{"out"};

  int steps() const;
  void validate() const;
};

struct SnapshotFrame {
  double t{0};
  int step{0};
  ScalarField field;
};

struct SimulationResult {
  ScalarField u;  // physical pressure at the final level
  int steps{0};
  double t{0};
  CflReport<double> cfl;
  std::vector<SnapshotFrame> frames;  // empty when a frame sink was given
  std::optional<EnergyTrace<double>> energy;
};

using FrameSink = std::function<void(const SnapshotFrame&)>;

/// Back-step, then `steps()` leapfrog or PML steps. Fails with "CFL
/// violation" when the stability check fails and the override is off;
/// propagates instability errors.
SimulationResult run_simulation(const RunConfig& config, const FrameSink& sink = {});

/// max-norm error of `result.u` against the problem's analytic solution.
double final_error(const RunConfig& config, const SimulationResult& result);

}  // namespace cwave
