#pragma once

// Semi-wavefront profiles: solutions of
//
//   phi'' - c phi' + phi(z) (1 - phi(z - ch)) = 0,
//   phi(-inf) = 0,  liminf_{z->+inf} phi > 0,
//
// computed on a truncated domain [z0 - ch, z0 + L].  Near -inf the profile is
// the pure mode A e^{lambda1 z}; those values are pinned as Dirichlet data on
// the strip [z0 - ch, z0], which both feeds the retarded term near the left
// edge and selects the translate.  The right boundary is a discrete zero-flux
// (mirror) condition so the plateau / oscillation floats.
//
// The profile is found as the root of the centered-difference system by damped
// Newton iteration with continuation in the delay (h = 0 first, then stepped
// up).  Forward marching of the same ODE is kept (march_steps) but is usable
// only over short stretches: the equation's second characteristic mode grows
// like e^{lambda2 z}, so any seed or discretization error is amplified by
// e^{lambda2 dz} per cell and marching from the deep tail blows up long before
// the front forms.  march_steps' blow-up detector reports exactly that, and a
// regression test keeps it honest.

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <algorithm>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "semiwave/dispersion.hpp"
#include "semiwave/evolution.hpp"
#include "semiwave/grid.hpp"
#include "semiwave/interp.hpp"
#include "semiwave/params.hpp"

namespace semiwave::profile {

using semiwave::Array;

// a priori plateau bound for the delayed equation
inline double hutchinson_bound(const Params& p) { return std::exp(p.ch()); }

struct TailState {
  double z0 = 0.0;
  double amplitude = 0.0;
  double phi0 = 0.0;   // phi(z0)
  double dphi0 = 0.0;  // phi'(z0)
  Array history;       // samples on [z0 - ch, z0], oldest first (m+1 points)
};

struct TailFit {
  double amplitude = 0.0;  // A in phi ~ A z^power e^{lambda1 z}
  double exponent = 0.0;   // fitted slope (should be lambda1)
  int power = 0;           // 1 exactly at c = 2, else 0
  double window_lo = 0.0, window_hi = 0.0;
  double residual = 0.0;   // max relative fit error on the window
};

struct Profile {
  Params params{2.1, 0.0};
  Grid grid;
  Array values;
  int strip = 1;  // leading Dirichlet nodes (tail data), m+1
  TailFit tail;
  double ode_residual = 0.0;
};

// Pure-mode state at depth amplitude*e^{lambda1 z0}, plus the sampled history
// the retarded term needs.  Profiles are supported for c >= 2.1: at c = 2 the
// tail picks up a polynomial factor z e^{z} and this closure does not apply.
inline TailState tail_init(const Params& p, double amplitude, double z0, double dz) {
  if (p.c < 2.1) throw invalid_config_error("tail_init: supported speeds are c >= 2.1");
  if (!(amplitude > 0.0)) throw invalid_config_error("tail_init: amplitude must be > 0");
  const auto roots = dispersion::char_roots(p);
  const double depth = amplitude * std::exp(roots.lambda1 * z0);
  if (depth > 1e-6)
    throw invalid_config_error("tail_init: z0 too far right (tail depth " +
                               std::to_string(depth) + " > 1e-6)");
  TailState s;
  s.z0 = z0;
  s.amplitude = amplitude;
  s.phi0 = depth;
  s.dphi0 = roots.lambda1 * depth;
  const int m = p.h > 0.0 ? std::max(1, static_cast<int>(std::llround(p.ch() / dz))) : 0;
  s.history.resize(m + 1);
  for (int j = 0; j <= m; ++j)
    s.history[j] = amplitude * std::exp(roots.lambda1 * (z0 - p.ch() + j * dz));
  return s;
}

namespace detail {

struct NewtonResult {
  Array values;
  double residual = std::numeric_limits<double>::infinity();
  int iterations = 0;
  bool converged = false;
};

// Centered-difference residual of the profile equation on the non-pinned
// nodes.  phi has full length n; the first `strip` nodes are data.
inline void bvp_residual(const Params& p, const Grid& g, int m, int strip, const Array& phi,
                         Eigen::VectorXd& F) {
  const int n = g.n;
  const double idz2 = 1.0 / (g.dz * g.dz);
  const double i2dz = 0.5 / g.dz;
  F.resize(n - strip);
  for (int i = strip; i < n; ++i) {
    const double pd = phi[i - m];
    if (i < n - 1) {
      const double lap = (phi[i + 1] - 2.0 * phi[i] + phi[i - 1]) * idz2;
      const double adv = (phi[i + 1] - phi[i - 1]) * i2dz;
      F[i - strip] = lap - p.c * adv + phi[i] * (1.0 - pd);
    } else {
      F[i - strip] = 2.0 * (phi[n - 2] - phi[n - 1]) * idz2 + phi[i] * (1.0 - pd);
    }
  }
}

inline NewtonResult newton_solve(const Params& p, const Grid& g, int m, int strip, Array seed,
                                 int max_iter, double tol) {
  const int n = g.n;
  const int nun = n - strip;
  const double idz2 = 1.0 / (g.dz * g.dz);
  const double i2dz = 0.5 / g.dz;

  Eigen::VectorXd F, Fc;
  Eigen::SparseMatrix<double> J(nun, nun);
  std::vector<Eigen::Triplet<double>> trip;
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  Array phi = std::move(seed);

  NewtonResult res;
  for (int it = 0; it < max_iter; ++it) {
    bvp_residual(p, g, m, strip, phi, F);
    const double rn = F.cwiseAbs().maxCoeff();
    res.residual = rn;
    res.iterations = it;
    if (rn < tol) {
      res.converged = true;
      res.values = std::move(phi);
      return res;
    }

    trip.clear();
    const auto add = [&](int row, int col, double v) {
      if (col >= strip) trip.emplace_back(row - strip, col - strip, v);
    };
    for (int i = strip; i < n; ++i) {
      const double pd = phi[i - m];
      if (i < n - 1) {
        add(i, i + 1, idz2 - p.c * i2dz);
        add(i, i - 1, idz2 + p.c * i2dz);
        add(i, i, -2.0 * idz2 + (1.0 - pd) + (m == 0 ? -phi[i] : 0.0));
        if (m > 0) add(i, i - m, -phi[i]);
      } else {
        add(i, i, -2.0 * idz2 + (1.0 - pd) + (m == 0 ? -phi[i] : 0.0));
        add(i, i - 1, 2.0 * idz2);
        if (m > 0) add(i, i - m, -phi[i]);
      }
    }
    J.setFromTriplets(trip.begin(), trip.end());
    lu.compute(J);
    if (lu.info() != Eigen::Success) break;
    Eigen::VectorXd dp = lu.solve(-F);
    if (!dp.allFinite()) break;

    double step = 1.0;
    bool accepted = false;
    for (int ls = 0; ls < 30; ++ls) {
      Array cand = phi;
      cand.segment(strip, nun) += step * dp.array();
      bvp_residual(p, g, m, strip, cand, Fc);
      const double rc = Fc.cwiseAbs().maxCoeff();
      if (rc < rn * (1.0 - 0.25 * step) || rc < tol) {
        phi = std::move(cand);
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;  // stalled; caller refines the continuation
  }
  res.values = std::move(phi);
  return res;
}

}  // namespace detail

struct ProfileOptions {
  double amplitude = 1.0;
  double depth = 1e-8;    // phi at the right end of the pinned strip
  double dz = 0.02;
  double zlen = 0.0;      // run length right of z0; 0 = max(60, 20 ch)
  int max_newton = 60;
  double newton_tol = 1e-11;
};

// Max centered-difference residual on the solved nodes, and the size of the
// second-difference term it is compared against.
inline std::pair<double, double> measure_ode_residual(const Profile& pr) {
  const Grid& g = pr.grid;
  const int m = pr.strip - 1;
  Eigen::VectorXd F;
  detail::bvp_residual(pr.params, g, m > 0 ? m : 0, pr.strip, pr.values, F);
  double scale = 0.0;
  const double idz2 = 1.0 / (g.dz * g.dz);
  for (int i = 1; i < g.n - 1; ++i)
    scale = std::max(scale,
                     std::abs((pr.values[i + 1] - 2.0 * pr.values[i] + pr.values[i - 1]) * idz2));
  // the last row is the boundary closure, not the interior operator
  const double interior = F.size() > 1 ? F.head(F.size() - 1).cwiseAbs().maxCoeff() : 0.0;
  return {interior, scale};
}

// Least-squares fit of log phi = log A + lambda1 z on the window where
// phi lies in [lo, hi] (defaults pick the genuinely solved part of the deep
// tail, below the pinned strip's depth scale).
inline TailFit tail_fit(const Profile& pr, double lo = 1e-7, double hi = 1e-3) {
  const auto roots = dispersion::char_roots(pr.params);
  std::vector<double> zs, ys;
  for (int i = pr.strip; i < pr.grid.n; ++i) {
    const double v = pr.values[i];
    if (v >= lo && v <= hi) {
      zs.push_back(pr.grid.z(i));
      ys.push_back(std::log(v));
    }
  }
  if (zs.size() < 5) throw invalid_config_error("tail_fit: insufficient tail depth");
  const size_t nn = zs.size();
  double sz = 0, sy = 0, szz = 0, szy = 0;
  for (size_t i = 0; i < nn; ++i) {
    sz += zs[i]; sy += ys[i]; szz += zs[i] * zs[i]; szy += zs[i] * ys[i];
  }
  const double slope = (nn * szy - sz * sy) / (nn * szz - sz * sz);
  const double intercept = (sy - slope * sz) / nn;

  TailFit fit;
  fit.amplitude = std::exp(intercept);
  fit.exponent = slope;
  fit.power = pr.params.c == 2.0 ? 1 : 0;
  fit.window_lo = zs.front();
  fit.window_hi = zs.back();
  for (size_t i = 0; i < nn; ++i)
    fit.residual = std::max(fit.residual, std::abs(std::exp(intercept + slope * zs[i] - ys[i]) - 1.0));
  if (std::abs(slope - roots.lambda1) > 0.02 * roots.lambda1)
    throw numerical_abort_error("tail_fit: fitted slope " + std::to_string(slope) +
                                " deviates from lambda1 = " + std::to_string(roots.lambda1) +
                                " by more than 2%");
  return fit;
}

inline void validate_profile(const Profile& pr) {
  const double mn = pr.values.minCoeff();
  if (mn < -1e-12)
    throw numerical_abort_error("profile: negative value " + std::to_string(mn));
  const double mx = pr.values.maxCoeff();
  const double bound = hutchinson_bound(pr.params) * (1.0 + 1e-6);
  if (mx > bound)
    throw numerical_abort_error("profile: sup " + std::to_string(mx) +
                                " exceeds the plateau bound e^{ch}");
  const int tail20 = std::max(1, pr.grid.n / 5);
  if (pr.values.tail(tail20).minCoeff() <= 0.0)
    throw numerical_abort_error("profile: vanishing right end (not a semi-wavefront)");
}

// Profile computation: Newton on the truncated BVP, with continuation in the
// delay.  Each continuation stage rebuilds the grid (the strip width c*h_k
// changes), re-pins the tail data, and seeds Newton with the previous stage
// interpolated.  Stage steps halve on failure.
inline Profile compute_profile(const Params& p, ProfileOptions opts = {}) {
  if (p.c < 2.1) throw invalid_config_error("compute_profile: supported speeds are c >= 2.1");
  if (!(opts.depth > 0.0) || opts.depth > 1e-6)
    throw invalid_config_error("compute_profile: depth must be in (0, 1e-6]");
  if (!(opts.amplitude > 0.0))
    throw invalid_config_error("compute_profile: amplitude must be > 0");
  const auto roots = dispersion::char_roots(p);
  const double z0 = std::log(opts.depth / opts.amplitude) / roots.lambda1;
  const double zlen = opts.zlen > 0.0 ? opts.zlen : std::max(60.0, 20.0 * p.ch());

  const auto stage_solve = [&](double hs, const Array* prev, const Grid* prev_grid,
                               Grid& g_out, int& m_out) -> detail::NewtonResult {
    const Params ps{p.c, hs};
    g_out = make_grid(ps, z0 - ps.ch(), ps.ch() + zlen, opts.dz);
    m_out = hs > 0.0 ? g_out.shift_cells(ps) : 0;
    const int strip = m_out + 1;
    Array seed(g_out.n);
    for (int i = 0; i < g_out.n; ++i) {
      const double z = g_out.z(i);
      if (i < strip || !prev)
        seed[i] = std::min(1.0, opts.amplitude * std::exp(roots.lambda1 * z));
      else
        seed[i] = std::clamp(sample_cubic(*prev_grid, *prev, std::min(z, prev_grid->z_max())),
                             0.0, 2.0 * hutchinson_bound(p));
    }
    for (int i = 0; i < strip; ++i)
      seed[i] = opts.amplitude * std::exp(roots.lambda1 * g_out.z(i));
    return detail::newton_solve(ps, g_out, m_out, strip, std::move(seed), opts.max_newton,
                                opts.newton_tol);
  };

  Grid g;
  int m = 0;
  auto res = stage_solve(0.0, nullptr, nullptr, g, m);
  if (!res.converged)
    throw numerical_abort_error("compute_profile: delay-free stage did not converge (residual " +
                                std::to_string(res.residual) + ")");

  double hs = 0.0, step = 0.25;
  while (hs < p.h) {
    const double hn = std::min(p.h, hs + step);
    Grid gn;
    int mn = 0;
    auto next = stage_solve(hn, &res.values, &g, gn, mn);
    if (!next.converged) {
      step *= 0.5;
      if (step < 1e-3)
        throw numerical_abort_error("compute_profile: continuation stalled at h = " +
                                    std::to_string(hs));
      continue;
    }
    res = std::move(next);
    g = gn;
    m = mn;
    hs = hn;
  }

  Profile pr;
  pr.params = p;
  pr.grid = g;
  pr.values = std::move(res.values);
  pr.strip = m + 1;
  validate_profile(pr);
  auto [resid, scale] = measure_ode_residual(pr);
  pr.ode_residual = resid;
  (void)scale;
  pr.tail = tail_fit(pr);
  return pr;
}

// Forward method-of-steps marching of the profile ODE (classical RK4 on the
// first-order system, retarded values read from already-computed samples with
// cubic interpolation at half steps).  Sound only over short stretches; from
// deep-tail seeds the e^{lambda2 z} mode takes over and the blow-up detector
// fires.
//
// init: full-length array whose first start+1 values are filled (history
// through the node `start`); dphi_start: phi' at that node.
inline Array march_from(const Params& p, const Grid& g, Array init, int start, double dphi_start) {
  const int n = g.n;
  const int m = p.h > 0.0 ? g.shift_cells(p) : 0;
  if (start < m) throw invalid_config_error("march_from: start node inside the history strip");
  const double cap = 10.0 * hutchinson_bound(p);
  const double dz = g.dz;

  // delayed read at fractional node index s (always <= current front)
  const auto delayed_at = [&](const Array& vals, double s, int known) -> double {
    const int i1 = static_cast<int>(std::floor(s));
    const int i0 = std::clamp(i1 - 1, 0, std::max(0, known - 3));
    const double t = s - i0;
    const double y0 = vals[i0], y1 = vals[i0 + 1], y2 = vals[i0 + 2], y3 = vals[i0 + 3];
    const double l0 = -(t - 1) * (t - 2) * (t - 3) / 6.0;
    const double l1 = t * (t - 2) * (t - 3) / 2.0;
    const double l2 = -t * (t - 1) * (t - 3) / 2.0;
    const double l3 = t * (t - 1) * (t - 2) / 6.0;
    return y0 * l0 + y1 * l1 + y2 * l2 + y3 * l3;
  };

  double phi = init[start], dphi = dphi_start;
  for (int i = start; i < n - 1; ++i) {
    const auto f = [&](double y0, double y1, double pd) {
      return std::pair<double, double>{y1, p.c * y1 - y0 * (1.0 - pd)};
    };
    const double pd_a = m > 0 ? init[i - m] : phi;
    const double pd_m = m > 0 ? delayed_at(init, i - m + 0.5, i) : 0.0;
    const double pd_b = m > 0 ? init[i + 1 - m] : 0.0;

    auto [k1a, k1b] = f(phi, dphi, pd_a);
    auto [k2a, k2b] = f(phi + 0.5 * dz * k1a, dphi + 0.5 * dz * k1b,
                        m > 0 ? pd_m : phi + 0.5 * dz * k1a);
    auto [k3a, k3b] = f(phi + 0.5 * dz * k2a, dphi + 0.5 * dz * k2b,
                        m > 0 ? pd_m : phi + 0.5 * dz * k2a);
    auto [k4a, k4b] = f(phi + dz * k3a, dphi + dz * k3b, m > 0 ? pd_b : phi + dz * k3a);

    phi += (dz / 6.0) * (k1a + 2 * k2a + 2 * k3a + k4a);
    dphi += (dz / 6.0) * (k1b + 2 * k2b + 2 * k3b + k4b);
    init[i + 1] = phi;

    if (!std::isfinite(phi) || std::abs(phi) > cap)
      throw numerical_abort_error(
          "march_from: blow-up at z = " + std::to_string(g.z(i + 1)) +
          " (unstable-mode contamination; use the boundary-value solver)");
    if (phi < -1e-6)
      throw numerical_abort_error("march_from: negative dip at z = " + std::to_string(g.z(i + 1)));
  }
  return init;
}

// March from a pure-mode tail seed across the whole grid.  Kept as the
// literal forward integrator; expected to abort via the blow-up detector for
// realistic windows.
inline Array march_steps(const Params& p, const Grid& g, const TailState& tail) {
  const int m = p.h > 0.0 ? g.shift_cells(p) : 0;
  if (tail.history.size() != m + 1)
    throw invalid_config_error("march_steps: history length does not match the grid");
  Array init = Array::Zero(g.n);
  init.head(m + 1) = tail.history;
  return march_from(p, g, std::move(init), m, tail.dphi0);
}

struct RelaxOptions {
  double tol = 1e-7;       // sup |v(T) - v(T-1)| convergence threshold
  double t_max = 400.0;
  double cfl = 0.25;
};

// Runs the co-moving-frame flow from `seed` until the per-unit-time sup change
// drops below tol; returns the terminal field.  The left boundary clamps to
// the seed's first value, the right floats (zero-flux).  Fixed points of the
// flow include the equilibria 0 and 1 as well as the semi-wavefront, so the
// caller decides what the terminal field is.
inline Field relax_profile(const Params& p, const Grid& g, const Field& seed,
                           RelaxOptions opts = {}) {
  if (seed.values.minCoeff() < 0.0)
    throw invalid_config_error("relax_profile: seed must be nonnegative");
  evolution::EvolutionConfig cfg =
      evolution::make_config(p, g, 1.0, seed.values[0], evolution::Frame::moving, 0, opts.cfl);
  const int slots = evolution::ring_slots(p, cfg);
  std::vector<Array> init(slots, seed.values);
  evolution::Stepper st(p, g, cfg, std::move(init));

  const long per_unit = std::lround(1.0 / cfg.dt);
  Array prev = seed.values;
  for (double T = 1.0; T <= opts.t_max + 1e-9; T += 1.0) {
    for (long k = 0; k < per_unit; ++k) st.step();
    const double diff = (st.state() - prev).abs().maxCoeff();
    if (diff <= opts.tol) return Field{g, st.state()};
    prev = st.state();
  }
  throw numerical_abort_error("relax_profile: no stationary state within t_max");
}

struct Alignment {
  double shift = 0.0;
  double sup_difference = 0.0;
};

// Translates b by the tail-amplitude shift (log A_a - log A_b)/lambda1 and
// measures the sup difference against a on the overlap.
inline Alignment align_profiles(const Profile& a, const Profile& b) {
  if (std::abs(a.params.c - b.params.c) > 1e-12 || std::abs(a.params.h - b.params.h) > 1e-12)
    throw invalid_config_error("align_profiles: profiles have different parameters");
  const auto roots = dispersion::char_roots(a.params);
  Alignment out;
  out.shift = (std::log(a.tail.amplitude) - std::log(b.tail.amplitude)) / roots.lambda1;

  const double lo = std::max(a.grid.z_min, b.grid.z_min - out.shift) + a.grid.dz;
  const double hi = std::min(a.grid.z_max(), b.grid.z_max() - out.shift) - a.grid.dz;
  if (!(lo < hi)) throw invalid_config_error("align_profiles: no overlap after shift");
  for (int i = 0; i < a.grid.n; ++i) {
    const double z = a.grid.z(i);
    if (z < lo || z > hi) continue;
    const double d = std::abs(a.values[i] - sample_cubic(b.grid, b.values, z + out.shift));
    out.sup_difference = std::max(out.sup_difference, d);
  }
  return out;
}

}  // namespace semiwave::profile
