// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "cwave/compact.hpp"
#include "cwave/diagnostics.hpp"
#include "cwave/pml.hpp"
#include "cwave/presets.hpp"
#include "cwave/simulation.hpp"
#include "cwave/stability.hpp"
#include "cwave/stepper.hpp"

using namespace cwave;

namespace {

constexpr double kPi = std::numbers::pi;

struct Outcome {
  bool pass{true};
  std::string detail;

  void check(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail += (detail.empty() ? "" : "; ") + std::string("failed: ") + what;
    }
  }
  void note(const std::string& what) { detail += (detail.empty() ? "" : "; ") + what; }
};

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

bool within_rel(double v, double ref, double tol) { return std::abs(v - ref) <= tol * std::abs(ref); }

std::vector<double> preset_errors(const char* name, const std::vector<double>& hs,
                                  std::optional<PmlFormulation> form = {}) {
  std::vector<double> out;
  for (double h : hs) {
    auto cfg = make_preset(name, h);
    if (form) cfg.pml = form;
    cfg.snapshot_times.clear();
    cfg.snapshot_every = std::max(1, cfg.steps());
    const auto res = run_simulation(cfg, [](const SnapshotFrame&) {});
    out.push_back(final_error(cfg, res));
  }
  return out;
}

// --- 1: Example 1 error table ---------------------------------------------------

Outcome example1_table() {
  Outcome o;
  const std::vector<double> hs{1.0 / 10, 1.0 / 16, 1.0 / 20};
  const double ref_e[] = {7.6115e-05, 9.5211e-06, 3.8419e-06};
  const double ref_p[] = {4.4228, 4.0671};
  const auto e = preset_errors("example1", hs);
  for (int i = 0; i < 3; ++i) {
    o.note("E=" + fmt("%.4e", e[i]));
    o.check(within_rel(e[i], ref_e[i], 0.05), "E(h=" + fmt("%.4g", hs[i]) + ") within 5%");
  }
  for (int i = 0; i < 2; ++i) {
    const double p = convergence_order(e[i], hs[i], e[i + 1], hs[i + 1]);
    o.note("p=" + fmt("%.4f", p));
    o.check(std::abs(p - ref_p[i]) <= 0.3, "order within 0.3");
  }
  return o;
}

// --- 2: Example 3 PML table -------------------------------------------------------

const std::vector<double> kEx3H{kPi / 25, kPi / 50, kPi / 75, kPi / 100};

Outcome example3_table(PmlFormulation form, bool gate_absolute) {
  Outcome o;
  const double ref_e[] = {2.2419e-03, 1.4182e-04, 2.8029e-05, 8.8773e-06};
  const auto e = preset_errors("example3", kEx3H, form);
  for (int i = 0; i < 4; ++i) {
    o.note("E=" + fmt("%.4e", e[i]) + " (x" + fmt("%.2f", ref_e[i] / e[i]) + " below ref)");
    if (gate_absolute) o.check(e[i] <= 2 * ref_e[i] && e[i] >= ref_e[i] / 2, "E within factor 2");
  }
  for (int i = 0; i < 3; ++i) {
    const double p = convergence_order(e[i], kEx3H[i], e[i + 1], kEx3H[i + 1]);
    o.note("p=" + fmt("%.3f", p));
    if (gate_absolute) o.check(p >= 3.98 - 0.15 && p <= 4.00 + 0.15, "order within 3.98-4.00 +- 0.15");
  }
  return o;
}

// --- 3: empirical CFL check --------------------------------------------------------

Outcome cfl_empirical() {
  Outcome o;
  const double h = 1.0 / 40;
  auto base = make_preset("example2", h);
  const auto& p = base.problem;
  const auto rep = cfl_threshold(p.model, 0.1 * h);
  o.note("tau/h limit=" + fmt("%.4f", rep.tau_over_h_limit));
  o.check(std::abs(rep.tau_over_h_limit - 0.1283) < 5e-4, "predicted limit 0.1283");

  {
    const double tau = 0.1 * h;
    LeapfrogStepper<double> st(p.model, p.bc, p.source, tau);
    auto s = st.initial_state(p.ic);
    // The Ricker pulse is negligible after twice its delay.
    const int quiet = static_cast<int>(std::ceil(2 * p.source.delay / tau));
    double ref = 0, peak = 0;
    try {
      for (int n = 1; n <= 800; ++n) {
        st.step(s);
        const double m = s.u_curr.values().abs().maxCoeff();
        if (n > quiet && n <= quiet + 100) ref = std::max(ref, m);
        if (n > quiet + 100) peak = std::max(peak, m);
      }
      o.note("tau/h=0.1: 800 steps, max/ref=" + fmt("%.3f", peak / ref));
      o.check(ref > 0 && peak < 10 * ref, "bounded at tau/h=0.1");
    } catch (const Error& e) {
      o.check(false, std::string("tau/h=0.1: ") + e.what());
    }
  }
  {
    const double tau = 0.15 * h;
    LeapfrogStepper<double> st(p.model, p.bc, p.source, tau);
    auto s = st.initial_state(p.ic);
    int fired = 0;
    try {
      for (int n = 1; n <= 2000; ++n) st.step(s);
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::Instability) fired = s.n + 1;
    }
    if (fired) {
      o.note("tau/h=0.15: detector fired at step " + std::to_string(fired));
    } else {
      o.note("tau/h=0.15: max|u| after 2000 steps=" + fmt("%.3e", s.u_curr.values().abs().maxCoeff()));
    }
    o.check(fired > 0, "instability detected within 2000 steps at tau/h=0.15");
  }
  return o;
}

// --- 4: spectra ---------------------------------------------------------------------

Outcome spectra() {
  Outcome o;
  for (int n : {4, 5, 8, 9, 16}) {
    const auto rep = spectral_report<double>(n);
    bool real = true, range = true, zero = false;
    for (const auto& z : rep.eigenvalues_m) {
      real &= std::abs(z.imag()) < 1e-10;
      range &= z.real() > -9 && z.real() <= 1e-10;
      zero |= std::abs(z) < 1e-10;
    }
    o.check(real, "M real at N=" + std::to_string(n));
    o.check(range, "M in (-9, 0] at N=" + std::to_string(n));
    o.check(zero == (n % 2 == 1), "zero eigenvalue iff N odd at N=" + std::to_string(n));
    auto an = analytic_spectra<double>(n);
    std::sort(an.eigs_a.begin(), an.eigs_a.end());
    std::sort(an.eigs_b_imag.begin(), an.eigs_b_imag.end());
    double da = 0, db = 0;
    for (int i = 0; i < n; ++i) {
      da = std::max(da, std::abs(an.eigs_a[i] - rep.eigenvalues_a[i]));
      db = std::max(db, std::abs(an.eigs_b_imag[i] - rep.eigenvalues_b_imag[i]));
    }
    o.check(da < 1e-10 && db < 1e-10, "analytic A/B spectra at N=" + std::to_string(n));
  }
  // 3D Kronecker sum at N = 3: spectrum is every triple sum of 1D eigenvalues.
  const int n = 3;
  const Matrix<double> m = build_1d_composed_operator<double>(n);
  const auto ev1 = dense_eigenvalues<double>(m);
  std::vector<double> sums;
  for (const auto& a : ev1)
    for (const auto& b : ev1)
      for (const auto& c : ev1) sums.push_back(a.real() + b.real() + c.real());
  std::sort(sums.begin(), sums.end());
  const auto ev3 = dense_eigenvalues<double>(kronecker_sum3<double>(m, m, m));
  double dk = 0;
  for (std::size_t i = 0; i < sums.size(); ++i)
    dk = std::max({dk, std::abs(ev3[i].real() - sums[i]), std::abs(ev3[i].imag())});
  o.note("kronecker max diff=" + fmt("%.2e", dk));
  o.check(ev3.size() == 27 && dk < 1e-8, "Kronecker sum spectra at N=3");
  return o;
}

// --- 5: operator orders --------------------------------------------------------------

double derivative_error(const std::function<double(double)>& f, const std::function<double(double)>& df,
                        double x0, double x1, int n) {
  const auto line = LineBuffer<double>::sampled(f, x0, x1, n);
  const auto d = compact_first_derivative_line(line);
  double e = std::max(std::abs(d.left - df(x0)), std::abs(d.right - df(x1)));
  for (int i = 0; i < n; ++i) e = std::max(e, std::abs(d.interior[i] - df(x0 + (i + 1) * line.h())));
  return e;
}

double flux_error(const std::function<double(double)>& u, const std::function<double(double)>& rho,
                  const std::function<double(double)>& exact, double x0, double x1, int n) {
  const auto out = flux_divergence_line(LineBuffer<double>::sampled(u, x0, x1, n),
                                        LineBuffer<double>::sampled(rho, x0, x1, n));
  const double h = (x1 - x0) / (n + 1);
  double e = 0;
  for (int i = 0; i < n; ++i) e = std::max(e, std::abs(out[i] - exact(x0 + (i + 1) * h)));
  return e;
}

Outcome operator_orders() {
  Outcome o;
  const auto order_of = [](auto&& err, int n) {
    // n + 1 cells halved: 2n + 1 interior nodes.
    const double e1 = err(n), e2 = err(2 * n + 1);
    return std::log2(e1 / e2);
  };
  const auto sin_d = [&](int n) {
    return derivative_error([](double x) { return std::sin(3 * x); },
                            [](double x) { return 3 * std::cos(3 * x); }, 0, 2, n);
  };
  const auto exp_d = [&](int n) {
    return derivative_error([](double x) { return std::exp(std::sin(x)); },
                            [](double x) { return std::cos(x) * std::exp(std::sin(x)); }, -1, 1.5, n);
  };
  // (u_x / rho)_x with u = sin 2x, rho = e^{x/2}: (2 cos 2x e^{-x/2})'.
  const auto flux = [&](int n) {
    return flux_error([](double x) { return std::sin(2 * x); }, [](double x) { return std::exp(x / 2); },
                      [](double x) {
                        return std::exp(-x / 2) * (-4 * std::sin(2 * x) - std::cos(2 * x));
                      },
                      0, 2, n);
  };
  for (int n : {19, 39}) {
    const double a = order_of(sin_d, n), b = order_of(exp_d, n), c = order_of(flux, n);
    o.note("n=" + std::to_string(n) + " p=" + fmt("%.2f", a) + "/" + fmt("%.2f", b) + "/" + fmt("%.2f", c));
    o.check(a >= 3.8 && b >= 3.8 && c >= 3.8, "order >= 3.8 at n=" + std::to_string(n));
  }
  // Exactness: derivative exact through cubics, flux exact for u quadratic with rho = 1.
  double ex = 0;
  for (int p = 0; p <= 3; ++p)
    ex = std::max(ex, derivative_error([p](double x) { return std::pow(x, p); },
                                       [p](double x) { return p ? p * std::pow(x, p - 1) : 0.0; }, 0.3,
                                       1.7, 11));
  ex = std::max(ex, flux_error([](double x) { return x * x - x; }, [](double) { return 1.0; },
                               [](double) { return 2.0; }, 0, 1, 11));
  o.note("polynomial error=" + fmt("%.1e", ex));
  o.check(ex < 1e-10, "polynomial exactness");
  return o;
}

// --- 6: PML energy decay -------------------------------------------------------------

Outcome pml_energy() {
  Outcome o;
  auto cfg = make_preset("example4-synthetic");
  cfg.snapshot_times.clear();
  cfg.snapshot_every = cfg.steps();
  const auto& g = cfg.problem.grid();
  const auto& lay = *cfg.problem.layout;
  const int layer_nodes = static_cast<int>(std::lround(lay.width[0] / g.h(0)));
  o.note("interior " + std::to_string(g.n(0)) + "x" + std::to_string(g.n(1)) + ", layer " +
         std::to_string(layer_nodes) + " nodes");
  o.check(layer_nodes >= 20, "layer at least 20 nodes");

  const auto res = run_simulation(cfg, [](const SnapshotFrame&) {});
  const auto& s = res.energy->samples();
  const double window = 2 * cfg.problem.source.delay + std::hypot(3.2, 1.2) / 1.5;
  int rises = 0;
  for (std::size_t i = 1; i < s.size(); ++i)
    if (s[i].first > window && s[i].second > s[i - 1].second * 1.01) ++rises;
  const double ratio = s.back().second / res.energy->peak();
  o.note("window t>" + fmt("%.3f", window) + ", rises=" + std::to_string(rises) + ", final/peak=" +
         fmt("%.2e", ratio));
  o.check(rises == 0, "energy non-increasing after window");
  o.check(ratio < 0.1, "final < 10% of peak");

  // sigma = 0 reproduces the plain stepper, step by step.
  const auto& p = cfg.problem;
  LeapfrogStepper<double> plain(p.model, p.bc, p.source, cfg.tau);
  double worst = 0;
  for (auto form : {PmlFormulation::Direct, PmlFormulation::Substituted}) {
    PmlStepper2D<double> pml(p.model, DampingField<double>::zero(g), p.bc, p.source, cfg.tau, form);
    auto a = plain.initial_state(p.ic);
    auto b = pml.initial_state(p.ic);
    for (int n = 0; n < 200; ++n) {
      plain.step(a);
      pml.step(b);
      worst = std::max(worst, (pml.pressure(b).values() - a.u_curr.values()).abs().maxCoeff());
    }
  }
  o.note("sigma=0 max diff=" + fmt("%.1e", worst));
  o.check(worst <= 1e-12, "sigma=0 matches plain stepper");
  return o;
}

// --- 7: character equation ----------------------------------------------------------

Outcome character() {
  Outcome o;
  for (double r : {0.01, 0.1, 0.14}) {
    const auto [a, b] = character_roots(r);
    o.check(std::abs(std::abs(a) - 1) < 1e-12 && std::abs(std::abs(b) - 1) < 1e-12,
            "|lambda| = 1 at r=" + fmt("%g", r));
  }
  for (double r : {0.149, 0.2}) {
    const auto [a, b] = character_roots(r);
    o.check(std::max(std::abs(a), std::abs(b)) > 1, "|lambda| > 1 at r=" + fmt("%g", r));
  }
  o.note("4/27=" + fmt("%.4f", 4.0 / 27));
  return o;
}

}  // namespace

int main() {
  struct Item {
    const char* label;
    std::function<Outcome()> run;
  };
  const std::vector<Item> items{
      {"1 example1 error table", example1_table},
      {"2 example3 PML table (substituted)", [] { return example3_table(PmlFormulation::Substituted, true); }},
      {"3 empirical CFL", cfl_empirical},
      {"4 spectral suite", spectra},
      {"5 operator orders", operator_orders},
      {"6 PML energy decay", pml_energy},
      {"7 character equation", character},
  };
  int failures = 0;
  for (const auto& item : items) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = item.run();
    } catch (const std::exception& e) {
      o.check(false, e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%s criterion %s: %s [%.1fs]\n", o.pass ? "PASS" : "FAIL", item.label, o.detail.c_str(),
                secs);
    std::fflush(stdout);
    failures += !o.pass;
  }
  // Not gated: the direct form with the same closure, for comparison.
  try {
    const auto o = example3_table(PmlFormulation::Direct, false);
    std::printf("INFO example3 PML table (direct): %s\n", o.detail.c_str());
  } catch (const std::exception& e) {
    std::printf("INFO example3 PML table (direct): %s\n", e.what());
  }
  return failures == 0 ? 0 : 1;
}
