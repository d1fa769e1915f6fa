#include "cwave/presets.hpp"

#include <charconv>
#include <cmath>
#include <limits>
#include <numbers>

namespace cwave {

namespace {

constexpr double kPi = std::numbers::pi;

int interior_count(double length, double h) {
  require(h > 0 && std::isfinite(h), "spacing must be positive");
  const long cells = std::lround(length / h);
  if (cells < 2 || std::abs(length / double(cells) - h) > 1e-6 * h)
    fail("spacing does not divide the domain");
  return static_cast<int>(cells - 1);
}

InitialConditions<double> zero_ic(const Grid& g) { return {ScalarField(g), ScalarField(g)}; }

// --- example1: 3D manufactured solution sin(t) cos(x + 2y + 3z) -------------

double ex1_rho(double x, double y, double z) { return std::exp((-x - y - z) / 3); }
double ex1_c2(double x, double y, double z) { return 1 + 0.5 * x * y * z; }

RunConfig example1(double h) {
  const int n = interior_count(1.0, h);
  const Grid g = Grid::build({{0.0, 1.0}, {0.0, 1.0}, {0.0, 1.0}}, {n, n, n});
  RunConfig cfg;
  Problem& p = cfg.problem;
  p.name = "example1";
  p.model = {sample(ex1_rho, g),
             sample([](double x, double y, double z) { return std::sqrt(ex1_c2(x, y, z)); }, g)};
  p.exact = [](double t, double x, double y, double z) {
    return std::sin(t) * std::cos(x + 2 * y + 3 * z);
  };
  p.ic = {sample([](double, double, double) { return 0.0; }, g),
          sample([](double x, double y, double z) { return std::cos(x + 2 * y + 3 * z); }, g)};
  p.bc = BoundarySpec<double>::from_solution(p.exact);
  // rho c^2 s = -sin t cos th + sin t c^2 (14 cos th + 2 sin th), th = x + 2y + 3z.
  const auto spatial = [](double x, double y, double z) {
    const double th = x + 2 * y + 3 * z;
    const double c2 = ex1_c2(x, y, z);
    return (-std::cos(th) + c2 * (14 * std::cos(th) + 2 * std::sin(th))) / (ex1_rho(x, y, z) * c2);
  };
  p.source = SourceSpec<double>::analytic(
      [spatial](double t, double x, double y, double z) { return std::sin(t) * spatial(x, y, z); },
      [spatial](double t, double x, double y, double z) { return std::cos(t) * spatial(x, y, z); });
  cfg.tau = h * h;
  cfg.t_end = 1.0;
  cfg.snapshot_every = std::max(1, cfg.steps());
  return cfg;
}

// --- example2: point Ricker source in rho = 2 z^2 + 1, c = 1 --------------------

RunConfig example2(double h) {
  const int n = interior_count(2.0, h);
  const Grid g = Grid::build({{0.0, 2.0}, {0.0, 2.0}, {0.0, 2.0}}, {n, n, n});
  RunConfig cfg;
  Problem& p = cfg.problem;
  p.name = "example2";
  p.model = {sample([](double, double, double z) { return 2 * z * z + 1; }, g), ScalarField(g, 1.0)};
  p.ic = zero_ic(g);
  p.bc = BoundarySpec<double>::zero();
  const double fp = 10;
  p.source = SourceSpec<double>::point_ricker(fp, 1 / (2 * fp), {1.0, 1.0, 1.0});
  cfg.tau = h / 10;
  cfg.t_end = 1.4;
  cfg.snapshot_times = {0.4, 0.9, 1.4};
  return cfg;
}

// --- example3: 2D PML manufactured solution e^t sin x sin y --------------------
//
// The auxiliary equation is solved unforced (g = 0, v(0) = 0), so v is the
// exact response of v_t + H v + J grad U = 0:
//   v_x(t) = -(sx - sy) cos x sin y E(sx, t),  E(s, t) = int_0^t e^{-s(t-r)} e^r dr
// and f carries div v. E(s, t) = (e^t - e^{-s t}) / (1 + s).

double ex3_e(double s, double t) {
  const double a = 1 + s;
  if (std::abs(a * t) < 1e-4) return std::exp(t) * t * (1 - a * t / 2 + a * a * t * t / 6);
  return -std::exp(t) * std::expm1(-a * t) / a;
}

// dE/ds.
double ex3_e_ds(double s, double t) {
  const double a = 1 + s;
  if (std::abs(a * t) < 1e-4)
    return std::exp(t) * t * (-t / 2 + a * t * t / 3 - a * a * t * t * t / 8);
  return (t * std::exp(-s * t) - ex3_e(s, t)) / a;
}

// d/dx [(sx - sy) cos x E(sx, t)] with sx = sin x - 1, sy = sin y - 1.
double ex3_flux_dx(double x, double y, double t) {
  const double d = std::sin(x) - std::sin(y);
  const double s = std::sin(x) - 1;
  const double cx = std::cos(x);
  return cx * cx * ex3_e(s, t) - d * std::sin(x) * ex3_e(s, t) + d * cx * cx * ex3_e_ds(s, t);
}

double ex3_source(double t, double x, double y) {
  const double sx = std::sin(x) - 1, sy = std::sin(y) - 1;
  const double u = std::exp(t) * std::sin(x) * std::sin(y);
  return u * (3 + sx + sy + sx * sy) + std::sin(y) * ex3_flux_dx(x, y, t) +
         std::sin(x) * ex3_flux_dx(y, x, t);
}

RunConfig example3(double h) {
  const int n = interior_count(2 * kPi, h);
  const Grid g = Grid::build({{0.0, 2 * kPi}, {0.0, 2 * kPi}}, {n, n});
  RunConfig cfg;
  Problem& p = cfg.problem;
  p.name = "example3";
  p.model = {ScalarField(g, 1.0), ScalarField(g, 1.0)};
  p.exact = [](double t, double x, double y, double) {
    return std::exp(t) * std::sin(x) * std::sin(y);
  };
  const auto u0 = sample([](double x, double y, double) { return std::sin(x) * std::sin(y); }, g);
  p.ic = {u0, u0};
  p.bc = BoundarySpec<double>::from_solution(p.exact);
  p.source = SourceSpec<double>::analytic(
      [](double t, double x, double y, double) { return ex3_source(t, x, y); });
  p.damping = DampingField<double>::from(
      sample([](double x, double, double) { return std::sin(x) - 1; }, g),
      sample([](double, double y, double) { return std::sin(y) - 1; }, g));
  cfg.pml = PmlFormulation::Substituted;
  cfg.tau = std::pow(5 * h / kPi, 2);
  cfg.t_end = 1.0;
  cfg.snapshot_every = std::max(1, cfg.steps());
  return cfg;
}

// --- example4-synthetic: layered 2D model with PML and energy trace ---------------
//
// Units are km and s. Interior region [0, 3.2] x [0, 1.2] (y is depth) wrapped
// in a 0.4 km layer on every side.

constexpr double kEx4Width = 0.4;
constexpr double kEx4X = 3.2;
constexpr double kEx4Y = 1.2;

double smooth_step(double s) { return 0.5 * (1 + std::tanh(s / 0.04)); }

RunConfig example4(double h) {
  const int nx = interior_count(kEx4X + 2 * kEx4Width, h);
  const int ny = interior_count(kEx4Y + 2 * kEx4Width, h);
  const Grid g = Grid::build({{-kEx4Width, kEx4X + kEx4Width}, {-kEx4Width, kEx4Y + kEx4Width}},
                             {nx, ny});
  RunConfig cfg;
  Problem& p = cfg.problem;
  p.name = "example4-synthetic";
  p.model = synthetic_layered_model(g);
  p.ic = zero_ic(g);
  p.bc = BoundarySpec<double>::zero();
  p.source = SourceSpec<double>::point_ricker(5.0, 0.2, {1.6, 0.25, 0.0});
  p.layout = PmlLayout<double>::around(0.0, kEx4X, 0.0, kEx4Y, kEx4Width, 100.0,
                                       DampingProfile::InverseDistance);
  p.damping = damping_profile(*p.layout, g);
  cfg.pml = PmlFormulation::Direct;
  cfg.tau = h / 20;
  cfg.t_end = 4.0;
  cfg.snapshot_times = {0.5, 1.0, 1.5, 2.0, 3.0};
  cfg.energy = true;
  return cfg;
}

}  // namespace

MediaModel<double> synthetic_layered_model(const Grid& g) {
  require(g.dims() == 2, "layered model is two-dimensional");
  const auto top = [](double x) { return 0.45 + 0.08 * std::sin(2 * kPi * x / kEx4X); };
  const auto bottom = [](double x) { return 0.85 - 0.1 * x / kEx4X; };
  MediaModel<double> m{
      sample([&](double x, double y, double) {
               return 1.0 + 0.6 * smooth_step(y - top(x)) + 0.6 * smooth_step(y - bottom(x));
             }, g),
      sample([&](double x, double y, double) {
               return 1.5 + 0.7 * smooth_step(y - top(x)) + 0.8 * smooth_step(y - bottom(x));
             }, g)};
  m.validate();
  return m;
}

const std::vector<PresetInfo>& list_presets() {
  static const std::vector<PresetInfo> presets{
      {"example1", "3D manufactured solution sin(t)cos(x+2y+3z), rho=e^{-(x+y+z)/3}, tau=h^2, T=1",
       1.0 / 10},
      {"example2", "3D Ricker point source (fp=10, d_r=0.05) in rho=2z^2+1, c=1 on [0,2]^3, T=1.4",
       1.0 / 40},
      {"example3", "2D PML manufactured solution e^t sin x sin y, sigma=sin-1, tau=(5h/pi)^2, T=1",
       kPi / 25},
      {"example4-synthetic",
       "2D layered model with 0.4 km inverse-distance PML, Ricker fp=5, d_r=0.2, energy trace",
       0.02},
  };
  return presets;
}

RunConfig make_preset(std::string_view name, std::optional<double> h) {
  for (const auto& info : list_presets()) {
    if (info.name != name) continue;
    const double hh = h.value_or(info.default_h);
    if (name == "example1") return example1(hh);
    if (name == "example2") return example2(hh);
    if (name == "example3") return example3(hh);
    return example4(hh);
  }
  fail("unknown preset '" + std::string(name) + "'");
}

double preset_tau(std::string_view name, double h) { return make_preset(name, h).tau; }

double parse_spacing(std::string_view text) {
  std::string s;
  for (char ch : text)
    if (ch != ' ' && ch != '\t') s.push_back(ch);
  const auto bad = [&]() -> double { fail("invalid spacing '" + std::string(text) + "'"); };
  const auto number = [&](std::string_view part) {
    if (part.empty()) bad();
    double scale = 1;
    if (part.size() >= 2 && part.substr(part.size() - 2) == "pi") {
      scale = kPi;
      part.remove_suffix(2);
      if (!part.empty() && part.back() == '*') part.remove_suffix(1);
      if (part.empty()) return scale;
    }
    double v = 0;
    const auto [ptr, ec] = std::from_chars(part.data(), part.data() + part.size(), v);
    if (ec != std::errc() || ptr != part.data() + part.size()) bad();
    return v * scale;
  };
  const auto slash = s.find('/');
  double v = slash == std::string::npos
                 ? number(s)
                 : number(std::string_view(s).substr(0, slash)) /
                       number(std::string_view(s).substr(slash + 1));
  if (!(v > 0) || !std::isfinite(v)) bad();
  return v;
}

std::vector<ConvergenceRow> convergence_table(std::string_view name,
                                              const std::vector<double>& hs) {
  require(!hs.empty(), "no grids given");
  std::vector<ConvergenceRow> rows;
  for (double h : hs) {
    const RunConfig cfg = make_preset(name, h);
    require(static_cast<bool>(cfg.problem.exact), "preset has no analytic solution");
    RunConfig quiet = cfg;
    quiet.snapshot_times.clear();
    quiet.snapshot_every = std::max(1, cfg.steps());
    const auto res = run_simulation(quiet, [](const SnapshotFrame&) {});
    ConvergenceRow row{h, cfg.tau, final_error(cfg, res), std::numeric_limits<double>::quiet_NaN()};
    if (!rows.empty()) row.order = convergence_order(rows.back().error, rows.back().h, row.error, h);
    rows.push_back(row);
  }
  return rows;
}

}  // namespace cwave
