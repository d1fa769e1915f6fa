#pragma once

// Combined compact fourth-order operators.
//
// First derivative, interior rows i = 1..N:
//   1/4 v'_{i-1} + v'_i + 1/4 v'_{i+1} = 3/(4h) (v_{i+1} - v_{i-1})
// with v'_0 and v'_{N+1} supplied by five-point one-sided formulas and moved
// to the right-hand side. The flux divergence (phi_x, phi = u_x / rho) is two
// such solves in sequence. All line kernels work on a full line of N + 2
// values: [boundary, interior..., boundary].

#include <array>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "cwave/error.hpp"
#include "cwave/grid.hpp"
#include "cwave/parallel.hpp"
#include "cwave/tridiagonal.hpp"

namespace cwave {

enum class Side { Left, Right };

/// Fourth-order one-sided first derivative at a boundary node. `five` holds
/// the node value followed by its four inward neighbours, so for the right
/// end it is (v_{N+1}, v_N, v_{N-1}, v_{N-2}, v_{N-3}).
template <typename Scalar>
Scalar one_sided_first_derivative(std::span<const Scalar, 5> five, Scalar h, Side side) {
  const Scalar d = Scalar(-25) / 12 * five[0] + Scalar(4) * five[1] - Scalar(3) * five[2] +
                   Scalar(4) / 3 * five[3] - Scalar(0.25) * five[4];
  return side == Side::Left ? d / h : -d / h;
}

template <typename Scalar>
Scalar one_sided_first_derivative(const std::array<Scalar, 5>& five, Scalar h, Side side) {
  return one_sided_first_derivative(std::span<const Scalar, 5>(five), h, side);
}

/// One grid line: interior values plus the two boundary values.
template <typename Scalar = double>
class LineBuffer {
 public:
  LineBuffer(const Eigen::Ref<const Vector<Scalar>>& interior, Scalar left, Scalar right, Scalar h)
      : full_(interior.size() + 2), h_(h) {
    require(interior.size() >= 5, "grid too small for 4th-order closure");
    require(h > 0, "spacing must be positive");
    full_[0] = left;
    full_.segment(1, interior.size()) = interior;
    full_[full_.size() - 1] = right;
  }

  /// Samples fn at x = x0 + i h for i = 0..n+1.
  template <typename Fn>
  static LineBuffer sampled(Fn&& fn, Scalar x0, Scalar x1, int n) {
    const Scalar h = (x1 - x0) / Scalar(n + 1);
    Vector<Scalar> in(n);
    for (int i = 1; i <= n; ++i) in[i - 1] = fn(x0 + Scalar(i) * h);
    return LineBuffer(in, fn(x0), fn(x1), h);
  }

  Index n() const { return full_.size() - 2; }
  Scalar h() const { return h_; }
  Scalar left() const { return full_[0]; }
  Scalar right() const { return full_[full_.size() - 1]; }
  auto interior() const { return full_.segment(1, n()); }
  const Vector<Scalar>& full() const { return full_; }

 private:
  Vector<Scalar> full_;
  Scalar h_;
};

/// Line operator for one axis length; holds the factored A = tridiag(1/4, 1, 1/4).
template <typename Scalar = double>
class CompactLine {
 public:
  CompactLine() = default;
  CompactLine(Index n, Scalar h) : n_(n), h_(h), a_(n, Scalar(0.25)) {
    require(n >= 5, "grid too small for 4th-order closure");
    require(h > 0, "spacing must be positive");
  }

  Index n() const { return n_; }
  Scalar h() const { return h_; }

  /// d = derivative of v on the full line (N + 2 entries each). Boundary
  /// entries come from the one-sided closure.
  void first_derivative(const Scalar* v, Scalar* d) const {
    const Index last = n_ + 1;
    d[0] = one_sided_first_derivative<Scalar>(
        std::array<Scalar, 5>{v[0], v[1], v[2], v[3], v[4]}, h_, Side::Left);
    d[last] = one_sided_first_derivative<Scalar>(
        std::array<Scalar, 5>{v[last], v[last - 1], v[last - 2], v[last - 3], v[last - 4]}, h_,
        Side::Right);
    const Scalar k = Scalar(0.75) / h_;
    for (Index i = 1; i <= n_; ++i) d[i] = k * (v[i + 1] - v[i - 1]);
    d[1] -= Scalar(0.25) * d[0];
    d[n_] -= Scalar(0.25) * d[last];
    a_.solve_in_place(d + 1);
  }

  /// out[1..N] = d/dx((u_x + extra) / rho). `extra` may be null; `scratch`
  /// needs 2 (N + 2) entries. out[0] and out[N+1] receive the boundary
  /// derivative of the flux.
  void flux_divergence(const Scalar* u, const Scalar* rho, const Scalar* extra, Scalar* out,
                       Scalar* scratch) const {
    const Index len = n_ + 2;
    Scalar* ux = scratch;
    Scalar* phi = scratch + len;
    first_derivative(u, ux);
    if (extra) {
      for (Index i = 0; i < len; ++i) phi[i] = (ux[i] + extra[i]) / rho[i];
    } else {
      for (Index i = 0; i < len; ++i) phi[i] = ux[i] / rho[i];
    }
    first_derivative(phi, out);
  }

 private:
  Index n_{0};
  Scalar h_{0};
  ToeplitzTridiagonal<Scalar> a_{};
};

template <typename Scalar>
struct LineDerivative {
  Vector<Scalar> interior;
  Scalar left;
  Scalar right;
};

template <typename Scalar>
LineDerivative<Scalar> compact_first_derivative_line(const LineBuffer<Scalar>& line) {
  const CompactLine<Scalar> op(line.n(), line.h());
  Vector<Scalar> d(line.n() + 2);
  op.first_derivative(line.full().data(), d.data());
  return {d.segment(1, line.n()), d[0], d[line.n() + 1]};
}

/// Interior values of (u_x / rho)_x along one line.
template <typename Scalar>
Vector<Scalar> flux_divergence_line(const LineBuffer<Scalar>& u_line,
                                    const LineBuffer<Scalar>& rho_line) {
  require(u_line.n() == rho_line.n() && u_line.h() == rho_line.h(),
          "u and rho lines must match");
  require((rho_line.full().array() > 0).all(), "invalid density");
  const CompactLine<Scalar> op(u_line.n(), u_line.h());
  const Index len = u_line.n() + 2;
  Vector<Scalar> out(len), scratch(2 * len);
  op.flux_divergence(u_line.full().data(), rho_line.full().data(), nullptr, out.data(),
                     scratch.data());
  return out.segment(1, u_line.n());
}

/// Applies the compact line operators along every grid line of a field.
/// Built once per grid; holds one CompactLine per active axis.
template <typename Scalar = double>
class CompactOperator {
 public:
  using FieldT = Field<Scalar>;

  CompactOperator() = default;
  explicit CompactOperator(const CartesianGrid<Scalar>& grid) : grid_(grid) {
    for (int a = 0; a < grid.dims(); ++a) lines_[a] = CompactLine<Scalar>(grid.n(a), grid.h(a));
  }

  const CartesianGrid<Scalar>& grid() const { return grid_; }
  const CompactLine<Scalar>& line(int axis) const { return lines_[axis]; }

  /// out(interior) = sum over axes of d_a((d_a u + extra_a) / rho). Boundary
  /// nodes of `out` are set to zero. `extra` holds one flux correction field
  /// per active axis, or is empty.
  void divergence(const FieldT& u, const FieldT& rho, FieldT& out,
                  std::span<const FieldT* const> extra = {}) const {
    check_grid(u);
    check_grid(rho);
    if (out.grid() != grid_) out = FieldT(grid_);
    out.values().setZero();
    for (int a = 0; a < grid_.dims(); ++a) {
      const Scalar* ex = extra.empty() || !extra[a] ? nullptr : extra[a]->data();
      sweep(a, /*interior_only=*/true, [&](const CompactLine<Scalar>& op, Index base, Index stride,
                                         Scalar* buf) {
        const Index len = op.n() + 2;
        Scalar* ul = buf;
        Scalar* rl = buf + len;
        Scalar* el = buf + 2 * len;
        Scalar* ol = buf + 3 * len;
        Scalar* scratch = buf + 4 * len;
        gather(u.data(), base, stride, len, ul);
        gather(rho.data(), base, stride, len, rl);
        if (ex) gather(ex, base, stride, len, el);
        op.flux_divergence(ul, rl, ex ? el : nullptr, ol, scratch);
        Scalar* o = out.data();
        for (Index i = 1; i <= op.n(); ++i) o[base + i * stride] += ol[i];
      });
    }
  }

  /// out = d_axis u on every line along `axis`, boundary nodes of the line
  /// included. Lines lying in boundary planes of the other axes are included
  /// too, so `out` is filled on the whole grid.
  void gradient(const FieldT& u, int axis, FieldT& out) const {
    check_grid(u);
    if (out.grid() != grid_) out = FieldT(grid_);
    sweep(axis, /*interior_only=*/false,
          [&](const CompactLine<Scalar>& op, Index base, Index stride, Scalar* buf) {
            const Index len = op.n() + 2;
            gather(u.data(), base, stride, len, buf);
            op.first_derivative(buf, buf + len);
            scatter(buf + len, base, stride, len, out.data());
          });
  }

 private:
  void check_grid(const FieldT& f) const {
    require(f.grid() == grid_, "field grid does not match operator grid");
  }

  static void gather(const Scalar* src, Index base, Index stride, Index len, Scalar* dst) {
    for (Index i = 0; i < len; ++i) dst[i] = src[base + i * stride];
  }
  static void scatter(const Scalar* src, Index base, Index stride, Index len, Scalar* dst) {
    for (Index i = 0; i < len; ++i) dst[base + i * stride] = src[i];
  }

  /// Calls fn(op, base, stride, buffer) for every line along `axis`. Lines
  /// are distinct per call, so writes through base/stride never overlap.
  template <typename Fn>
  void sweep(int axis, bool interior_only, Fn&& fn) const {
    const int b0 = axis == 0 ? 1 : 0;
    const int b1 = axis == 2 ? 1 : 2;
    const auto span_of = [&](int b) -> std::pair<int, int> {
      if (b >= grid_.dims()) return {0, 0};
      return interior_only ? std::pair{1, grid_.n(b)} : std::pair{0, grid_.n(b) + 1};
    };
    const auto [p0, p1] = span_of(b0);
    const auto [q0, q1] = span_of(b1);
    const long np = p1 - p0 + 1;
    const long nq = q1 - q0 + 1;
    const Index stride = grid_.stride(axis);
    const Index s0 = grid_.stride(b0);
    const Index s1 = grid_.stride(b1);
    const CompactLine<Scalar>& op = lines_[axis];
    const Index len = op.n() + 2;
    parallel_lines(np * nq, [&](long begin, long end) {
      std::vector<Scalar> buf(6 * len);
      for (long l = begin; l < end; ++l) {
        const Index p = p0 + l % np;
        const Index q = q0 + l / np;
        fn(op, p * s0 + q * s1, stride, buf.data());
      }
    });
  }

  CartesianGrid<Scalar> grid_{};
  std::array<CompactLine<Scalar>, 3> lines_{};
};

/// Interior values of div((1/rho) grad u); boundary nodes are zero. The
/// boundary layer of `u` must already hold the Dirichlet data.
template <typename Scalar>
Field<Scalar> divergence_laplacian(const Field<Scalar>& u, const MediaModel<Scalar>& model) {
  model.validate();
  Field<Scalar> out(u.grid());
  CompactOperator<Scalar>(u.grid()).divergence(u, model.rho, out);
  return out;
}

/// Same, after filling the boundary layer of a copy of `u` from `bc` at t.
template <typename Scalar>
Field<Scalar> divergence_laplacian(const Field<Scalar>& u, const MediaModel<Scalar>& model,
                                   const BoundarySpec<Scalar>& bc, Scalar t) {
  Field<Scalar> filled = u;
  bc.apply(filled, t);
  return divergence_laplacian(filled, model);
}

}  // namespace cwave
