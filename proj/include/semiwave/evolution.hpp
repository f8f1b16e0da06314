#pragma once

// Method-of-lines integrator for the co-moving-frame equation
//
//   v_t = v_zz - c v_z + v(t,z) (1 - v(t-h, z-ch))
//
// and, with frame = original, for the unshifted equation
//
//   u_t = u_xx + u(t,x) (1 - u(t-h, x)).
//
// Space: second-order centered differences; left boundary Dirichlet, right
// boundary zero-flux via a mirror ghost node (so the plateau / oscillation can
// float).  Time: classical fourth-order Runge-Kutta.  The delay state lives in
// a ring of N_t + 1 fields spaced dt = h / N_t, so t - h always lands on a
// slot; the half-step stage values interpolate linearly between slots.  The
// spatial delay shift is a whole number of cells by grid construction, and
// reads that fall left of the domain clamp to the boundary value.
//
// dt <= cfl * dz^2 keeps the explicit diffusion stable; dt must divide h
// exactly so the ring stays aligned with the delay.

#include <Eigen/Dense>
#include <cmath>
#include <functional>
#include <vector>

#include "semiwave/grid.hpp"
#include "semiwave/params.hpp"

namespace semiwave::evolution {

using semiwave::Array;

enum class Frame { moving, original };

struct EvolutionConfig {
  double dt = 0.0;          // snapped: h / N_t (or cfl dz^2 when h = 0)
  double T_final = 10.0;
  double left_value = 0.0;  // Dirichlet clamp at z_min
  Frame frame = Frame::moving;
  double cfl = 0.25;
  int snapshot_every = 0;   // full-field cadence in steps; 0 = none
  // Left cells held frozen at their initial values.  1 = plain Dirichlet
  // clamp.  Runs that start on a profile may pin the whole delay strip
  // (shift_cells + 1): the truncated domain otherwise admits a slow
  // quasi-translation of the front that the whole-line dynamics forbid.
  int pin_cells = 1;
};

// Largest dt of the form h / N_t with dt <= cfl dz^2 (h > 0); plain cfl dz^2
// when h = 0.
inline double snapped_dt(const Params& p, const Grid& g, double cfl = 0.25) {
  const double dt_max = cfl * g.dz * g.dz;
  if (p.h <= 0.0) return dt_max;
  const int N_t = std::max(1, static_cast<int>(std::ceil(p.h / dt_max - 1e-12)));
  return p.h / N_t;
}

inline EvolutionConfig make_config(const Params& p, const Grid& g, double T_final,
                                   double left_value = 0.0, Frame frame = Frame::moving,
                                   int snapshot_every = 0, double cfl = 0.25) {
  EvolutionConfig cfg;
  cfg.dt = snapped_dt(p, g, cfl);
  cfg.T_final = T_final;
  cfg.left_value = left_value;
  cfg.frame = frame;
  cfg.cfl = cfl;
  cfg.snapshot_every = snapshot_every;
  return cfg;
}

inline int ring_slots(const Params& p, const EvolutionConfig& cfg) {
  if (p.h <= 0.0) return 1;
  const double ratio = p.h / cfg.dt;
  const int N_t = static_cast<int>(std::llround(ratio));
  if (std::abs(ratio - N_t) > 1e-9 * std::max(1.0, ratio))
    throw invalid_config_error("evolution: dt must divide h exactly");
  return N_t + 1;
}

// Ring of the last h/dt + 1 time levels; slot(0) is t - h, slot(N_t) is t.
struct HistoryBuffer {
  std::vector<Array> fields;
  int head = 0;  // index of the oldest slot (time t - h)

  explicit HistoryBuffer(std::vector<Array> init) : fields(std::move(init)) {}

  const Array& slot(int k) const { return fields[(head + k) % fields.size()]; }

  // drop the oldest level, store the newest
  void push(Array next) {
    fields[head] = std::move(next);
    head = static_cast<int>((head + 1) % fields.size());
  }
};

namespace detail {

// Delayed factor H(z) = d(z - shift*dz) with clamp to the left boundary value.
inline void shift_into(const Array& d, int shift, Array& out) {
  const auto n = d.size();
  if (shift == 0) {
    out = d;
    return;
  }
  out.resize(n);
  out.head(shift).setConstant(d[0]);
  out.tail(n - shift) = d.head(n - shift);
}

}  // namespace detail

// dv/dt of the semi-discrete system.  H is the (already shifted) delayed
// field; reaction = v (1 - H).  With linear_coeff set, the reaction is
// coeff * v instead (the frozen-background linearized equation).
inline void rhs(const Grid& g, double adv, const Array& v, const Array& H, Array& out,
                const Array* linear_coeff = nullptr, int pin = 1) {
  const int n = g.n;
  const double idz2 = 1.0 / (g.dz * g.dz);
  const double i2dz = 0.5 / g.dz;
  out.resize(n);
  auto vm = v.segment(0, n - 2), v0 = v.segment(1, n - 2), vp = v.segment(2, n - 2);
  if (linear_coeff)
    out.segment(1, n - 2) = (vp - 2.0 * v0 + vm) * idz2 - adv * (vp - vm) * i2dz +
                            linear_coeff->segment(1, n - 2) * v0;
  else
    out.segment(1, n - 2) = (vp - 2.0 * v0 + vm) * idz2 - adv * (vp - vm) * i2dz +
                            v0 * (1.0 - H.segment(1, n - 2));
  // mirror ghost: v[n] := v[n-2]; advection term vanishes at the wall
  const double lap_last = 2.0 * (v[n - 2] - v[n - 1]) * idz2;
  out[n - 1] = linear_coeff ? lap_last + (*linear_coeff)[n - 1] * v[n - 1]
                            : lap_last + v[n - 1] * (1.0 - H[n - 1]);
  out.head(pin).setZero();  // frozen cells (Dirichlet)
}

struct Stepper {
  Params p;
  Grid grid;
  EvolutionConfig cfg;
  HistoryBuffer ring;
  double t = 0.0;
  int shift = 0;   // delay shift in cells
  double adv = 0.0;

  // scratch
  Array H0, H1, Hmid, k1, k2, k3, k4, tmp;

  // init: fields on [t0-h, t0] at dt spacing, oldest first; size ring_slots().
  Stepper(const Params& p_, const Grid& g, const EvolutionConfig& c, std::vector<Array> init)
      : p(p_), grid(g), cfg(c), ring(std::move(init)) {
    validate_grid(g, p);
    if (cfg.dt > cfg.cfl * g.dz * g.dz * (1.0 + 1e-9))
      throw invalid_config_error("evolution: dt violates the diffusion stability bound");
    const int slots = ring_slots(p, cfg);
    if (static_cast<int>(ring.fields.size()) != slots)
      throw invalid_config_error("evolution: initial segment must have h/dt + 1 levels");
    if (cfg.pin_cells < 1 || cfg.pin_cells > g.n - 2)
      throw invalid_config_error("evolution: pin_cells out of range");
    for (const auto& f : ring.fields)
      if (f.size() != g.n) throw invalid_config_error("evolution: init level size mismatch");
    if (cfg.frame == Frame::moving) {
      adv = p.c;
      shift = p.h > 0.0 ? grid.shift_cells(p) : 0;
    }
  }

  const Array& state() const { return ring.fields[(ring.head + ring.fields.size() - 1) % ring.fields.size()]; }

  // One RK4 step.  Delayed stage values: slot(0) at t-h, slot(1) at t-h+dt,
  // midpoint by linear interpolation.  For h = 0 the delayed value is the
  // current stage value itself (no ring).
  void step(const Array* linear_coeff = nullptr) {
    const Array& v = state();
    const bool delayed = p.h > 0.0;
    if (delayed && !linear_coeff) {
      detail::shift_into(ring.slot(0), shift, H0);
      detail::shift_into(ring.slot(1), shift, H1);
      Hmid = 0.5 * (H0 + H1);
    }
    const double dt = cfg.dt;

    const int pin = cfg.pin_cells;
    if (delayed && !linear_coeff) {
      rhs(grid, adv, v, H0, k1, nullptr, pin);
      tmp = v + 0.5 * dt * k1;
      rhs(grid, adv, tmp, Hmid, k2, nullptr, pin);
      tmp = v + 0.5 * dt * k2;
      rhs(grid, adv, tmp, Hmid, k3, nullptr, pin);
      tmp = v + dt * k3;
      rhs(grid, adv, tmp, H1, k4, nullptr, pin);
    } else {
      rhs(grid, adv, v, v, k1, linear_coeff, pin);
      tmp = v + 0.5 * dt * k1;
      rhs(grid, adv, tmp, tmp, k2, linear_coeff, pin);
      tmp = v + 0.5 * dt * k2;
      rhs(grid, adv, tmp, tmp, k3, linear_coeff, pin);
      tmp = v + dt * k3;
      rhs(grid, adv, tmp, tmp, k4, linear_coeff, pin);
    }

    Array next = v + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    next[0] = cfg.left_value;
    if (!next.allFinite()) throw numerical_abort_error("evolution: NaN/Inf at t=" + std::to_string(t));
    ring.push(std::move(next));
    t += dt;
  }
};

struct RunRecord {
  std::vector<double> snap_times;
  std::vector<Array> snapshots;
  Grid grid;
};

// Integrates to T_final.  per_step(t, field) fires after every step (weighted
// norm probes); snapshots are collected every cfg.snapshot_every steps.
inline RunRecord run(const Params& p, const Grid& g, const EvolutionConfig& cfg,
                     std::vector<Array> init,
                     const std::function<void(double, const Array&)>& per_step = nullptr) {
  Stepper st(p, g, cfg, std::move(init));
  RunRecord rec;
  rec.grid = g;
  const long nsteps = std::lround(cfg.T_final / cfg.dt);
  if (per_step) per_step(0.0, st.state());
  if (cfg.snapshot_every > 0) {
    rec.snap_times.push_back(0.0);
    rec.snapshots.push_back(st.state());
  }
  for (long k = 1; k <= nsteps; ++k) {
    st.step();
    if (per_step) per_step(st.t, st.state());
    if (cfg.snapshot_every > 0 && (k % cfg.snapshot_every == 0 || k == nsteps)) {
      rec.snap_times.push_back(st.t);
      rec.snapshots.push_back(st.state());
    }
  }
  return rec;
}

// Linear equation eta_t = eta_zz - c eta_z + (1 - b(z - ch)) eta over a frozen
// background b (profile samples or any nonnegative field on the same grid).
// The reaction coefficient is frozen in time and there is no delayed eta term,
// so the delay ring degenerates to a single slot.
inline RunRecord linearized_run(const Params& p, const Grid& g, const EvolutionConfig& cfg,
                                const Array& eta0, const Array& background,
                                const std::function<void(double, const Array&)>& per_step = nullptr) {
  if (background.size() != g.n)
    throw invalid_config_error("linearized_run: background size mismatch");
  if (background.minCoeff() < 0.0)
    throw invalid_config_error("linearized_run: background must be nonnegative");
  const int shift = (cfg.frame == Frame::moving && p.h > 0.0) ? g.shift_cells(p) : 0;
  Array shifted;
  detail::shift_into(background, shift, shifted);
  const Array coeff = 1.0 - shifted;

  const Params p0{p.c, 0.0};  // undelayed stepper; coeff carries the background
  EvolutionConfig lcfg = cfg;
  lcfg.left_value = 0.0;
  Stepper st(p0, g, lcfg, {eta0});
  st.adv = (cfg.frame == Frame::moving) ? p.c : 0.0;

  RunRecord rec;
  rec.grid = g;
  const long nsteps = std::lround(cfg.T_final / cfg.dt);
  if (per_step) per_step(0.0, st.state());
  if (cfg.snapshot_every > 0) {
    rec.snap_times.push_back(0.0);
    rec.snapshots.push_back(st.state());
  }
  for (long k = 1; k <= nsteps; ++k) {
    st.step(&coeff);
    if (per_step) per_step(st.t, st.state());
    if (cfg.snapshot_every > 0 && (k % cfg.snapshot_every == 0 || k == nsteps)) {
      rec.snap_times.push_back(st.t);
      rec.snapshots.push_back(st.state());
    }
  }
  return rec;
}

}  // namespace semiwave::evolution
