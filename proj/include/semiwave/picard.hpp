#pragma once

// Independent oracle for the original-frame equation
//
//   u_t = u_xx + u(t,x) (1 - u(t-h,x)),
//
// on one delay interval [0,h], where the delayed factor is known data.  The
// variation-of-constants form
//
//   u(t) = G(t)*u(0) + int_0^t G(t-s)*[(1-u0(s-h)) u(s)] ds
//
// is iterated to its fixed point (Picard), with composite trapezoid quadrature
// in s.  Two numerical choices keep it honest and fast:
//
//   - the panel [t-dt, t], where the kernel width collapses, is replaced by
//     dt * G(dt/2)*g(t-dt): first-order in the panel, no G(0+) evaluation;
//   - inside the quadrature the kernel at lag (i-j)dt is applied as (i-j)
//     compositions of G(dt), so each sweep advances one running prefix sum
//     instead of re-convolving every panel (the composition defect per level
//     is at the kernel-truncation noise floor, far below the oracle's own
//     quadrature error).  The free term G(t_i)*u(0) uses direct kernels.
//
// This module is the yardstick the finite-difference evolution is compared
// against; it shares no discretization machinery with it.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "semiwave/grid.hpp"
#include "semiwave/params.hpp"

namespace semiwave::picard {

using semiwave::Array;

// Trapezoid samples of G(t,x) = e^{-x^2/4t} / (2 sqrt(pi t)) on |x| <= 8 sqrt(t).
// The neglected tail mass is erfc(4) ~ 1.5e-8; the discrete mass must sit in
// [1 - 1e-6, 1], which bounds both truncation and grid-aliasing error.
struct KernelTable {
  double t = 0.0;
  double dx = 0.0;
  int half = 0;
  Array weights;  // length 2*half + 1, symmetric, endpoints halved
  double mass = 0.0;
};

inline KernelTable make_kernel(double t, double dx) {
  if (!(t > 0.0)) throw invalid_config_error("make_kernel: need t > 0");
  if (!(dx > 0.0)) throw invalid_config_error("make_kernel: need dx > 0");
  KernelTable k;
  k.t = t;
  k.dx = dx;
  k.half = std::max(1, static_cast<int>(std::ceil(8.0 * std::sqrt(t) / dx)));
  k.weights.resize(2 * k.half + 1);
  const double norm = dx / (2.0 * std::sqrt(M_PI * t));
  for (int j = 0; j <= k.half; ++j) {
    const double w = norm * std::exp(-(j * dx) * (j * dx) / (4.0 * t));
    k.weights[k.half + j] = w;
    k.weights[k.half - j] = w;
  }
  k.weights[0] *= 0.5;
  k.weights[2 * k.half] *= 0.5;
  k.mass = k.weights.sum();
  if (k.mass > 1.0 + 1e-12)
    throw invalid_config_error("make_kernel: discrete mass " + std::to_string(k.mass) +
                               " > 1 (t too small for dx: grid aliasing)");
  if (k.mass < 1.0 - 1e-6)
    throw invalid_config_error("make_kernel: discrete mass " + std::to_string(k.mass) +
                               " < 1 - 1e-6 (dx too coarse for t)");
  return k;
}

// Discrete convolution with constant extension beyond the ends.
inline Array convolve(const KernelTable& k, const Array& f) {
  const int n = static_cast<int>(f.size());
  const int half = k.half, W = 2 * half + 1;
  Array out(n);
  const int lo_edge = std::min(half, n);
  const int hi_edge = std::max(lo_edge, n - half);
  for (int i = 0; i < lo_edge; ++i) {
    double acc = 0.0;
    for (int j = 0; j < W; ++j) acc += k.weights[j] * f[std::clamp(i - half + j, 0, n - 1)];
    out[i] = acc;
  }
  for (int i = lo_edge; i < hi_edge; ++i)
    out[i] = (k.weights * f.segment(i - half, W)).sum();
  for (int i = hi_edge; i < n; ++i) {
    double acc = 0.0;
    for (int j = 0; j < W; ++j) acc += k.weights[j] * f[std::clamp(i - half + j, 0, n - 1)];
    out[i] = acc;
  }
  return out;
}

inline Field heat_convolve(double t, const Field& f) {
  return Field{f.grid, convolve(make_kernel(t, f.grid.dz), f.values)};
}

struct PicardResult {
  std::vector<Array> fields;  // at t = 0, dt, ..., h
  double dt = 0.0;
  int iterations = 0;
  double final_diff = 0.0;
  std::vector<double> diffs;  // sup difference after each sweep
};

// u0_segment: fields at t = -h, -h+dt, ..., 0 (so size fixes dt = h/N).
// Returns the fixed point on t = 0, dt, ..., h.
inline PicardResult picard_solve(const Params& p, const Grid& g,
                                 const std::vector<Array>& u0_segment,
                                 double tol = 1e-10, int max_sweeps = 200) {
  if (!(p.h > 0.0))
    throw invalid_config_error("picard_solve: needs h > 0 (one delay interval)");
  const int N = static_cast<int>(u0_segment.size()) - 1;
  if (N < 2) throw invalid_config_error("picard_solve: history needs at least 3 time levels");
  for (const auto& f : u0_segment)
    if (f.size() != g.n)
      throw invalid_config_error("picard_solve: history field does not match the grid");
  const double dt = p.h / N;

  const KernelTable k_dt = make_kernel(dt, g.dz);
  const KernelTable k_half = make_kernel(dt / 2.0, g.dz);

  std::vector<Array> base(N + 1);
  base[0] = u0_segment[N];
  for (int i = 1; i <= N; ++i) base[i] = convolve(make_kernel(i * dt, g.dz), base[0]);

  PicardResult out;
  out.dt = dt;
  std::vector<Array> u = base, unew(N + 1);
  std::vector<Array> gval(N + 1);
  double prev_diff = std::numeric_limits<double>::infinity();
  int grow_streak = 0;

  for (int sweep = 1; sweep <= max_sweeps; ++sweep) {
    for (int i = 0; i <= N; ++i) gval[i] = (1.0 - u0_segment[i]) * u[i];

    unew[0] = base[0];
    Array P = Array::Zero(g.n);  // accumulated full panels, advanced by G(dt) per level
    for (int i = 1; i <= N; ++i) {
      unew[i] = base[i] + P + dt * convolve(k_half, gval[i - 1]);
      if (i < N) {
        Array inner = P + (dt / 2.0) * (convolve(k_dt, gval[i - 1]) + gval[i]);
        P = convolve(k_dt, inner);
      }
    }

    double diff = 0.0;
    for (int i = 0; i <= N; ++i)
      diff = std::max(diff, (unew[i] - u[i]).abs().maxCoeff());
    out.diffs.push_back(diff);
    out.iterations = sweep;
    u.swap(unew);

    if (diff <= tol) {
      out.final_diff = diff;
      out.fields = std::move(u);
      return out;
    }
    grow_streak = diff > prev_diff ? grow_streak + 1 : 0;
    if (grow_streak >= 3)
      throw numerical_abort_error(
          "picard_solve: no contraction (sup difference grew 3 sweeps in a row, last = " +
          std::to_string(diff) + ")");
    prev_diff = diff;
  }
  throw numerical_abort_error("picard_solve: not converged to " + std::to_string(tol) +
                              " in " + std::to_string(max_sweeps) + " sweeps");
}

// Method of steps across several delay intervals: each interval's output is
// the next one's history segment.
inline std::vector<PicardResult> picard_chain(const Params& p, const Grid& g,
                                              std::vector<Array> u0_segment, int intervals,
                                              double tol = 1e-10) {
  std::vector<PicardResult> out;
  for (int k = 0; k < intervals; ++k) {
    out.push_back(picard_solve(p, g, u0_segment, tol));
    u0_segment = out.back().fields;
  }
  return out;
}

struct GradientReport {
  std::vector<double> times;
  std::vector<double> gradients;  // max_i |du/dx|(t) (one-sided differences)
  std::vector<double> bounds;
  double lip0 = 0.0;          // Lipschitz constant of u(0,.)
  double sup_reaction = 0.0;  // sup over the interval of |u (1 - u_delayed)|
  bool pass = true;
};

// Smoothing estimate: the gradient stays below
//   Lip(u(0,.)) + sqrt(t)/(2 sqrt(pi)) * sup|u (1 - u_delayed)|,
// up to scheme slack.
inline GradientReport lipschitz_growth_check(const Grid& g,
                                             const std::vector<Array>& u0_segment,
                                             const PicardResult& sol, double slack = 0.10) {
  const int N = static_cast<int>(sol.fields.size()) - 1;
  if (static_cast<int>(u0_segment.size()) != N + 1)
    throw invalid_config_error("lipschitz_growth_check: segment/solution length mismatch");

  const auto max_grad = [&](const Array& f) {
    return (f.tail(g.n - 1) - f.head(g.n - 1)).abs().maxCoeff() / g.dz;
  };

  GradientReport rep;
  rep.lip0 = max_grad(sol.fields[0]);
  for (int i = 0; i <= N; ++i)
    rep.sup_reaction =
        std::max(rep.sup_reaction, ((1.0 - u0_segment[i]) * sol.fields[i]).abs().maxCoeff());

  for (int i = 0; i <= N; ++i) {
    const double t = i * sol.dt;
    const double grad = max_grad(sol.fields[i]);
    const double bound =
        (rep.lip0 + std::sqrt(t) / (2.0 * std::sqrt(M_PI)) * rep.sup_reaction) * (1.0 + slack);
    rep.times.push_back(t);
    rep.gradients.push_back(grad);
    rep.bounds.push_back(bound);
    if (grad > bound) rep.pass = false;
  }
  return rep;
}

}  // namespace semiwave::picard
