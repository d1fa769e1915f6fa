#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cwave/io.hpp"
#include "cwave/simulation.hpp"

namespace cwave {

struct PresetInfo {
  std::string name;
  std::string description;
  double default_h{0};
};

/// example1, example2, example3, example4-synthetic.
const std::vector<PresetInfo>& list_presets();

/// Fully built run for a preset at spacing `h` (default: the preset's own).
/// The time step follows the preset's rule for that h.
RunConfig make_preset(std::string_view name, std::optional<double> h = std::nullopt);

/// Time step the preset uses at spacing h.
double preset_tau(std::string_view name, double h);

/// Accepts "0.025", "1/40", "pi/25", "2pi/50" and "2*pi/50".
double parse_spacing(std::string_view text);

/// Runs the preset at each spacing and reports max-norm errors at t_end with
/// successive observed orders. Needs a preset with an analytic solution.
std::vector<ConvergenceRow> convergence_table(std::string_view name, const std::vector<double>& hs);

/// Layered two-dimensional model used by example4-synthetic, sampled on `g`.
MediaModel<double> synthetic_layered_model(const Grid& g);

}  // namespace cwave
