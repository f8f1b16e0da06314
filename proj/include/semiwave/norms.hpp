#pragma once

// Weighted-norm measurements |f|_lambda = sup e^{-lambda z}|f(z)| and the
// verifiers that check a measured disturbance series against the certified
// decay K e^{delta t}, interval by interval of length h.
//
// The weight e^{-lambda z} explodes toward z_min and amplifies left-boundary
// discretization error, so measurements run over a window inset from the
// domain edges (default 5 length units per side); every report carries its
// window.

#include <Eigen/Dense>
#include <cmath>
#include <utility>
#include <vector>

#include "semiwave/grid.hpp"
#include "semiwave/params.hpp"

namespace semiwave::norms {

using semiwave::Array;

struct Window {
  double z_lo;
  double z_hi;
};

inline Window default_window(const Grid& g, double inset = 5.0) {
  Window w{g.z_min + inset, g.z_max() - inset};
  if (!(w.z_lo < w.z_hi)) throw invalid_config_error("norm window: domain too small for inset");
  return w;
}

// max over window nodes of e^{-lambda z} |f(z)|
template <typename Derived>
inline double weighted_norm(const Grid& g, const Eigen::ArrayBase<Derived>& f, double lambda,
                            const Window& w) {
  const int i0 = static_cast<int>(std::ceil((w.z_lo - g.z_min) / g.dz - 1e-9));
  const int i1 = static_cast<int>(std::floor((w.z_hi - g.z_min) / g.dz + 1e-9));
  const int lo = std::max(i0, 0), hi = std::min(i1, g.n - 1);
  if (lo > hi) throw invalid_config_error("weighted_norm: empty window");
  const int len = hi - lo + 1;
  const Array zs = g.z_min + g.dz * (lo + Array::LinSpaced(len, 0.0, len - 1.0));
  return ((-lambda * zs).exp() * f.derived().segment(lo, len).abs()).maxCoeff();
}

struct WeightedSeries {
  double lambda = 0.0;
  Window window{0.0, 0.0};
  std::vector<double> times;
  std::vector<double> values;
};

// Per-snapshot weighted norm of v(t,.) - phi on a shared grid.
inline WeightedSeries disturbance_series(const Grid& g, const std::vector<double>& times,
                                         const std::vector<Array>& snapshots, const Array& phi,
                                         double lambda, Window w) {
  if (times.size() != snapshots.size())
    throw invalid_config_error("disturbance_series: times/snapshots length mismatch");
  if (phi.size() != g.n)
    throw invalid_config_error("disturbance_series: reference profile does not match the grid");
  WeightedSeries s;
  s.lambda = lambda;
  s.window = w;
  s.times = times;
  s.values.reserve(times.size());
  for (const Array& v : snapshots) {
    if (v.size() != g.n)
      throw invalid_config_error("disturbance_series: snapshot does not match the grid");
    s.values.push_back(weighted_norm(g, (v - phi).eval(), lambda, w));
  }
  return s;
}

// Least-squares slope of log(values) over t >= t_start; returns (slope, r^2).
inline std::pair<double, double> fit_decay_rate(const WeightedSeries& s, double t_start) {
  std::vector<double> ts, ys;
  for (size_t i = 0; i < s.times.size(); ++i) {
    if (s.times[i] < t_start) continue;
    if (!(s.values[i] > 0.0))
      throw invalid_config_error("fit_decay_rate: nonpositive value in fit range");
    ts.push_back(s.times[i]);
    ys.push_back(std::log(s.values[i]));
  }
  if (ts.size() < 10) throw invalid_config_error("fit_decay_rate: need at least 10 samples");
  const size_t n = ts.size();
  double st = 0, sy = 0, stt = 0, sty = 0, syy = 0;
  for (size_t i = 0; i < n; ++i) {
    st += ts[i]; sy += ys[i]; stt += ts[i] * ts[i]; sty += ts[i] * ys[i]; syy += ys[i] * ys[i];
  }
  const double denom = n * stt - st * st;
  const double slope = (n * sty - st * sy) / denom;
  const double ss_tot = syy - sy * sy / n;
  const double intercept = (sy - slope * st) / n;
  double ss_res = 0;
  for (size_t i = 0; i < n; ++i) {
    const double r = ys[i] - (intercept + slope * ts[i]);
    ss_res += r * r;
  }
  const double r2 = ss_tot > 0 ? 1.0 - ss_res / ss_tot : 1.0;
  return {slope, r2};
}

struct IntervalBound {
  int k;             // delay interval index, 1-based
  double C_k;        // K e^{(k-1) delta h}
  double measured;   // sup of the series on interval k
};

struct BoundReport {
  double K = 0.0;
  double delta = 0.0;
  double slack = 0.05;
  Window window{0.0, 0.0};
  double lambda = 0.0;
  std::vector<IntervalBound> per_interval;
  bool pass = false;
};

// Checks every sample against K e^{delta t} (1 + slack).  The per-interval
// rows record the constants C_k = K e^{(k-1) delta h} of the interval-by-
// interval contraction argument together with the measured sup on each
// interval; for h = 0 the whole series is one interval.
inline BoundReport verify_iterative_bound(const WeightedSeries& s, double K, double delta,
                                          double h, double slack = 0.05) {
  if (delta > 0.0) throw invalid_config_error("verify_iterative_bound: delta must be <= 0");
  if (!(K >= 0.0)) throw invalid_config_error("verify_iterative_bound: K must be >= 0");
  BoundReport rep;
  rep.K = K;
  rep.delta = delta;
  rep.slack = slack;
  rep.window = s.window;
  rep.lambda = s.lambda;
  rep.pass = true;
  for (size_t i = 0; i < s.times.size(); ++i) {
    const double t = s.times[i], v = s.values[i];
    const int k = h > 0.0 ? static_cast<int>(std::floor(t / h + 1e-12)) + 1 : 1;
    while (static_cast<int>(rep.per_interval.size()) < k) {
      const int kk = static_cast<int>(rep.per_interval.size()) + 1;
      rep.per_interval.push_back({kk, K * std::exp((kk - 1) * delta * h), 0.0});
    }
    auto& row = rep.per_interval[k - 1];
    row.measured = std::max(row.measured, v);
    if (v > K * std::exp(delta * t) * (1.0 + slack)) rep.pass = false;
  }
  return rep;
}

// The contraction argument's comparison function on one delay interval:
//   M(t) = e^{-(beta+delta) t + delta h} + R (1 - e^{-(beta+delta) t})/(beta+delta),
// which must be nonincreasing on [0, h] and end at or below e^{delta h}.
// With the certified delta (equality e^{delta h}(delta+beta) = R) M is constant.
// The beta+delta -> 0 limit is e^{delta h} + R t.
inline double m_function(double beta, double delta, double R, double h, double t) {
  const double s = beta + delta;
  if (std::abs(s * h) < 1e-12) return std::exp(delta * h) + R * t;
  return std::exp(-s * t + delta * h) + R * (-std::expm1(-s * t)) / s;
}

inline bool m_function_check(const Params& p, double lambda, double delta, double R) {
  const double beta = p.c * lambda - lambda * lambda - 1.0;
  if (!(R <= beta))
    throw infeasible_error("m_function_check: R > beta (infeasible certificate)");
  const double h = p.h;
  const int steps = std::max(1, static_cast<int>(std::ceil(h / 1e-3)));
  double prev = m_function(beta, delta, R, h, 0.0);
  for (int i = 1; i <= steps; ++i) {
    const double t = h * i / steps;
    const double cur = m_function(beta, delta, R, h, t);
    if (cur > prev + 1e-12) return false;
    prev = cur;
  }
  return m_function(beta, delta, R, h, h) <= std::exp(delta * h) * (1.0 + 1e-10);
}

}  // namespace semiwave::norms
