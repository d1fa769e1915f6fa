#pragma once

// Frozen-coefficient stability analysis of the compact scheme.
//
// With A = tridiag(1/4, 1, 1/4) and B = tridiag(-3/4, 0, 3/4), the 1D
// second-derivative operator is M = A^{-1} B A^{-1} B, whose spectrum lies in
// (-9, 0]. The 3D operator with coefficients frozen at their worst case is
//   c_max^2 (q_max / q_min) (M (+) M (+) M)
// so its spectrum lies in (-27 c_max^2 q_max/q_min, 0]. Leapfrog is then
// stable when r = c_max^2 (q_max/q_min) tau^2 / h^2 < 4/27.

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "cwave/error.hpp"
#include "cwave/grid.hpp"

namespace cwave {

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Scalar>
constexpr Scalar cfl_limit() {
  return Scalar(2) / (Scalar(3) * std::numbers::sqrt3_v<Scalar>);
}

template <typename Scalar = double>
struct CflReport {
  Scalar r{0};                 // c_max^2 (q_max/q_min) tau^2 / h^2
  Scalar tau_over_h{0};
  Scalar threshold{cfl_limit<Scalar>()};  // bound on c_max sqrt(q_max/q_min) tau/h
  Scalar tau_over_h_limit{0};  // threshold / (c_max sqrt(q_max/q_min))
  Scalar c_max{0};
  Scalar q_max{0};
  Scalar q_min{0};
  Scalar h{0};
  bool spacing_approximated{false};  // nonuniform grid, minimum spacing used
  bool pass{false};
};

template <typename Scalar>
CflReport<Scalar> cfl_threshold(const MediaModel<Scalar>& model, Scalar tau, Scalar h) {
  require(tau > 0 && h > 0, "tau and h must be positive");
  CflReport<Scalar> rep;
  rep.q_min = model.rho.values().minCoeff();
  rep.q_max = model.rho.values().maxCoeff();
  if (!(rep.q_min > 0)) fail("invalid density");
  rep.c_max = model.c.values().maxCoeff();
  const Scalar ratio = rep.q_max / rep.q_min;
  rep.h = h;
  rep.tau_over_h = tau / h;
  rep.r = rep.c_max * rep.c_max * ratio * rep.tau_over_h * rep.tau_over_h;
  rep.tau_over_h_limit = rep.threshold / (rep.c_max * std::sqrt(ratio));
  rep.pass = rep.c_max * std::sqrt(ratio) * rep.tau_over_h < rep.threshold;
  return rep;
}

/// Uses the grid's spacing; on a nonuniform grid the smallest spacing is
/// used and the report says so.
template <typename Scalar>
CflReport<Scalar> cfl_threshold(const MediaModel<Scalar>& model, Scalar tau) {
  const auto& g = model.grid();
  auto rep = cfl_threshold(model, tau, g.min_spacing());
  rep.spacing_approximated = !g.uniform_spacing();
  return rep;
}

/// 27 c_max^2 q_max / q_min: magnitude bound of the frozen 3D operator spectrum.
template <typename Scalar>
Scalar spectral_bound(const MediaModel<Scalar>& model) {
  const Scalar q_min = model.rho.values().minCoeff();
  if (!(q_min > 0)) fail("invalid density");
  const Scalar c_max = model.c.values().maxCoeff();
  return Scalar(27) * c_max * c_max * model.rho.values().maxCoeff() / q_min;
}

template <typename Scalar = double>
struct AnalyticSpectra {
  std::vector<Scalar> eigs_a;       // 1 + cos(l pi/(N+1)) / 2
  std::vector<Scalar> eigs_b_imag;  // imaginary parts, 3/2 cos(l pi/(N+1))
};

template <typename Scalar = double>
AnalyticSpectra<Scalar> analytic_spectra(int n) {
  require(n >= 1, "N must be positive");
  AnalyticSpectra<Scalar> s;
  for (int l = 1; l <= n; ++l) {
    const Scalar c = std::cos(Scalar(l) * std::numbers::pi_v<Scalar> / Scalar(n + 1));
    s.eigs_a.push_back(Scalar(1) + c / Scalar(2));
    // cos(pi/2) is not exactly zero in floating point.
    s.eigs_b_imag.push_back(2 * l == n + 1 ? Scalar(0) : Scalar(1.5) * c);
  }
  return s;
}

template <typename Scalar = double>
Matrix<Scalar> compact_matrix_a(int n) {
  Matrix<Scalar> a = Matrix<Scalar>::Identity(n, n);
  for (int i = 0; i + 1 < n; ++i) a(i, i + 1) = a(i + 1, i) = Scalar(0.25);
  return a;
}

template <typename Scalar = double>
Matrix<Scalar> compact_matrix_b(int n) {
  Matrix<Scalar> b = Matrix<Scalar>::Zero(n, n);
  for (int i = 0; i + 1 < n; ++i) {
    b(i, i + 1) = Scalar(0.75);
    b(i + 1, i) = Scalar(-0.75);
  }
  return b;
}

/// Dense M = A^{-1} B A^{-1} B for 2 <= N <= 64.
template <typename Scalar = double>
Matrix<Scalar> build_1d_composed_operator(int n) {
  require(n >= 2 && n <= 64, "dense verification supports 2 <= N <= 64");
  const auto a = compact_matrix_a<Scalar>(n);
  const auto b = compact_matrix_b<Scalar>(n);
  const Eigen::LLT<Matrix<Scalar>> llt(a);
  const Matrix<Scalar> ainv_b = llt.solve(b);
  return ainv_b * ainv_b;
}

template <typename Scalar>
Matrix<Scalar> kronecker(const Matrix<Scalar>& k, const Matrix<Scalar>& j) {
  Matrix<Scalar> out(k.rows() * j.rows(), k.cols() * j.cols());
  for (Index r = 0; r < k.rows(); ++r)
    for (Index c = 0; c < k.cols(); ++c)
      out.block(r * j.rows(), c * j.cols(), j.rows(), j.cols()) = k(r, c) * j;
  return out;
}

/// K (+) J (+) G = I (x) I (x) K + I (x) J (x) I + G (x) I (x) I, all N x N.
template <typename Scalar>
Matrix<Scalar> kronecker_sum3(const Matrix<Scalar>& k, const Matrix<Scalar>& j,
                              const Matrix<Scalar>& g) {
  const Index n = k.rows();
  require(j.rows() == n && g.rows() == n, "Kronecker sum operands must share a size");
  const Matrix<Scalar> id = Matrix<Scalar>::Identity(n, n);
  return kronecker<Scalar>(kronecker<Scalar>(id, id), k) +
         kronecker<Scalar>(kronecker<Scalar>(id, j), id) +
         kronecker<Scalar>(kronecker<Scalar>(g, id), id);
}

template <typename Scalar>
std::vector<std::complex<Scalar>> dense_eigenvalues(const Matrix<Scalar>& m) {
  Eigen::EigenSolver<Matrix<Scalar>> es(m, /*computeEigenvectors=*/false);
  if (es.info() != Eigen::Success) fail("eigenvalue iteration did not converge");
  std::vector<std::complex<Scalar>> out(es.eigenvalues().data(),
                                        es.eigenvalues().data() + es.eigenvalues().size());
  std::sort(out.begin(), out.end(), [](auto x, auto y) {
    return x.real() != y.real() ? x.real() < y.real() : x.imag() < y.imag();
  });
  return out;
}

template <typename Scalar = double>
struct SpectralReport {
  int n{0};
  std::vector<Scalar> eigenvalues_a;                // dense, ascending
  std::vector<Scalar> eigenvalues_b_imag;           // dense, ascending imaginary parts
  std::vector<std::complex<Scalar>> eigenvalues_m;  // dense, ascending real part
  Scalar bound{27};                                 // 27 c_max^2 q_max / q_min
  bool zero_eig_present{false};
};

/// Dense eigen-analysis of A, B and M at size N. `bound` is reported as is;
/// use spectral_bound(model) for a specific medium.
template <typename Scalar = double>
SpectralReport<Scalar> spectral_report(int n, Scalar bound = Scalar(27),
                                       Scalar zero_tol = Scalar(1e-10)) {
  SpectralReport<Scalar> rep;
  rep.n = n;
  rep.bound = bound;
  const Eigen::SelfAdjointEigenSolver<Matrix<Scalar>> sa(compact_matrix_a<Scalar>(n),
                                                         Eigen::EigenvaluesOnly);
  rep.eigenvalues_a.assign(sa.eigenvalues().data(), sa.eigenvalues().data() + n);
  for (const auto& z : dense_eigenvalues<Scalar>(compact_matrix_b<Scalar>(n)))
    rep.eigenvalues_b_imag.push_back(z.imag());
  std::sort(rep.eigenvalues_b_imag.begin(), rep.eigenvalues_b_imag.end());
  rep.eigenvalues_m = dense_eigenvalues<Scalar>(build_1d_composed_operator<Scalar>(n));
  for (const auto& z : rep.eigenvalues_m) rep.zero_eig_present |= std::abs(z) < zero_tol;
  return rep;
}

/// Roots of lambda^2 - (2 - 27 r) lambda + 1 = 0.
template <typename Scalar>
std::pair<std::complex<Scalar>, std::complex<Scalar>> character_roots(Scalar r) {
  const Scalar b = Scalar(2) - Scalar(27) * r;
  const std::complex<Scalar> disc = std::sqrt(std::complex<Scalar>(b * b - Scalar(4)));
  return {(b + disc) / Scalar(2), (b - disc) / Scalar(2)};
}

}  // namespace cwave
