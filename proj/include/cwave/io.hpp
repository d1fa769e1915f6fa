#pragma once

// On-disk formats.
//
// Snapshot file:
//   bytes 0..7   "CWAVSNAP"
//   bytes 8..15  u64 little-endian length L of the meta block
//   next L bytes UTF-8 JSON meta
//   remainder    f64 little-endian payload, x-fastest, boundary nodes included
//
// Meta keys: format_version, t, step, dims, n (interior counts), shape
// (stored counts), min, max, h, dtype ("f64"), order ("x-fastest").

#include <filesystem>
#include <iosfwd>
#include <string>

#include "cwave/diagnostics.hpp"
#include "cwave/simulation.hpp"

namespace cwave {

void write_snapshot(const SnapshotFrame& frame, const std::filesystem::path& path);
SnapshotFrame read_snapshot(const std::filesystem::path& path);

/// Media model from raw arrays. `meta_path` is JSON with nx, ny, nz (stored
/// node counts; nz = 1 or absent for 2D), h, origin, dtype ("f32" | "f64") and
/// order ("x-fastest"). Values are widened to f64.
MediaModel<double> load_model(const std::filesystem::path& rho_path,
                              const std::filesystem::path& c_path,
                              const std::filesystem::path& meta_path);

void write_energy_csv(const EnergyTrace<double>& trace, const std::filesystem::path& path);

struct ConvergenceRow {
  double h{0};
  double tau{0};
  double error{0};
  double order{0};  // NaN on the first row
};

/// "h,tau,E,order" header; the first row's order column is empty.
void write_convergence_csv(const std::vector<ConvergenceRow>& rows, std::ostream& os);

std::string cfl_report_json(const CflReport<double>& rep);
std::string spectral_report_json(const SpectralReport<double>& rep);

}  // namespace cwave
