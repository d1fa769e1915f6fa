#pragma once

#include <cmath>
#include <filesystem>
#include <random>
#include <string>

#include <doctest.h>

#include "cwave/grid.hpp"

namespace testing {

inline cwave::Grid unit_square(int n) {
  return cwave::Grid::build({{0.0, 1.0}, {0.0, 1.0}}, {n, n});
}

inline cwave::Grid unit_cube(int n) {
  return cwave::Grid::build({{0.0, 1.0}, {0.0, 1.0}, {0.0, 1.0}}, {n, n, n});
}

inline cwave::MediaModel<double> unit_media(const cwave::Grid& g) {
  return {cwave::ScalarField(g, 1.0), cwave::ScalarField(g, 1.0)};
}

/// Fresh empty directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("cwave_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

inline cwave::ScalarField random_field(const cwave::Grid& g, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  cwave::ScalarField f(g);
  for (auto& v : f.values()) v = dist(rng);
  return f;
}

}  // namespace testing
