#pragma once

// Closed-form spectral quantities of the front's tail linearization and the
// stability / uniqueness certificates built from them.
//
// The quadratic lambda^2 - c*lambda + 1 has real roots 0 < lambda1 <= lambda2
// exactly when c >= 2; they govern the exponential tail of the front at -inf.
// On (lambda1, lambda2) the decay coefficient beta = c*lambda - lambda^2 - 1
// is positive, and a weighted-norm disturbance contracts like e^{-beta t}
// as long as the delayed feedback term, worth e^{-lambda c h}*sup|phi|, fits
// under beta.  The certificate below turns that comparison into a concrete
// nonpositive decay exponent delta.

#include <algorithm>
#include <cmath>
#include <functional>
#include <future>
#include <thread>
#include <vector>

#include "semiwave/params.hpp"

namespace semiwave::dispersion {

struct SpectralData {
  double lambda1;
  double lambda2;
  double discriminant;  // c^2 - 4
};

// Roots of lambda^2 - c*lambda + 1 = 0, ordered.  lambda1 is computed as
// 1/lambda2 (the product of the roots is exactly 1), which is cancellation-free
// near c = 2.
inline SpectralData char_roots(const Params& p) {
  if (p.c < 2.0) throw subcritical_speed_error(p.c);
  const double disc = p.c * p.c - 4.0;
  const double l2 = 0.5 * (p.c + std::sqrt(std::max(disc, 0.0)));
  return {1.0 / l2, l2, disc};
}

// beta_lambda = c*lambda - lambda^2 - 1: positive exactly on (lambda1, lambda2),
// zero at the roots.  This is the per-unit-time contraction rate of the
// lambda-weighted norm under the linearized flow.
template <typename S>
inline S decay_coeff(S c, S lambda) {
  return c * lambda - lambda * lambda - S(1);
}

inline double decay_rate(const Params& p, double lambda) { return decay_coeff(p.c, lambda); }

// Raw characteristic quadratic; e^{eps_lambda * t} bounds the growth of the
// weighted norm under the zero-background linear equation.  eps = -beta.
template <typename S>
inline S char_quadratic(S c, S lambda) {
  return lambda * lambda - c * lambda + S(1);
}

// Q(lambda) = e^{lambda c h} * beta_lambda on [lambda1, lambda2]; the uniqueness
// threshold is its value at the interior critical point.
inline double q_eval(const Params& p, double lambda) {
  const SpectralData s = char_roots(p);
  if (lambda < s.lambda1 - 1e-12 || lambda > s.lambda2 + 1e-12)
    throw invalid_config_error("q_eval: lambda outside [lambda1, lambda2]");
  return std::exp(lambda * p.ch()) * decay_rate(p, lambda);
}

// Critical point of Q in closed form.  Differentiating
// e^{lambda c h}(c lambda - lambda^2 - 1) gives
// ch*lambda^2 + (2 - c^2 h)*lambda + (ch - c) = 0, whose relevant root is
//   c/2 - 1/(ch) + (1/2) sqrt(c^2 + 4/(c^2 h^2) - 4).
// Singular at h = 0 (the maximizer of plain beta is c/2 there; see region code).
inline double kappa_crit(const Params& p) {
  if (p.h <= 0.0) throw invalid_config_error("kappa_crit: h must be > 0");
  if (p.c < 2.0) throw subcritical_speed_error(p.c);
  const double ch = p.ch();
  return 0.5 * p.c - 1.0 / ch + 0.5 * std::sqrt(p.c * p.c + 4.0 / (ch * ch) - 4.0);
}

struct Certificate {
  double lambda;     // weight exponent, in (lambda1, lambda2)
  double beta;       // decay coefficient at lambda
  double sup_bound;  // caller's bound on sup phi (measured or e^{ch})
  double R;          // e^{-lambda c h} * sup_bound
  double delta;      // certified exponent <= 0; NaN when infeasible
  bool feasible;     // R <= beta
};

// Feasibility is R <= beta.  When feasible, delta is the unique root of
// g(delta) = e^{delta h}(delta + beta) = R on [-beta, 0]; g is strictly
// increasing there with g(-beta) = 0 and g(0) = beta >= R, so bisection with
// the upper endpoint kept on the g >= R side converges to the smallest
// admissible delta and the returned value satisfies g(delta) >= R - 1e-10.
inline Certificate certify_stability(const Params& p, double lambda, double sup_bound) {
  const SpectralData s = char_roots(p);
  if (!(lambda > s.lambda1 && lambda < s.lambda2))
    throw invalid_config_error("certify_stability: lambda must lie in (lambda1, lambda2)");
  if (!(sup_bound > 0.0) || !std::isfinite(sup_bound))
    throw invalid_config_error("certify_stability: sup_bound must be positive and finite");

  const double beta = decay_rate(p, lambda);
  const double R = std::exp(-lambda * p.ch()) * sup_bound;
  Certificate cert{lambda, beta, sup_bound, R, std::nan(""), false};
  if (R > beta) return cert;

  if (p.h == 0.0) {  // g is linear: delta + beta = R
    cert.delta = R - beta;
    cert.feasible = true;
    return cert;
  }

  const auto g = [&](double d) { return std::exp(d * p.h) * (d + beta); };
  double lo = -beta, hi = 0.0;
  while (hi - lo > 1e-10) {
    const double mid = 0.5 * (lo + hi);
    if (g(mid) >= R)
      hi = mid;
    else
      lo = mid;
  }
  cert.delta = hi;
  cert.feasible = true;
  return cert;
}

struct RegionTags {
  bool stable_at_half_c;
  bool unique;
};

// Uniqueness threshold: Q at its critical point for h > 0; for h = 0 the
// continuous limit max beta = c^2/4 - 1, attained at lambda = c/2.
inline double uniqueness_threshold(const Params& p) {
  if (p.h > 0.0) return q_eval(p, kappa_crit(p));
  return 0.25 * p.c * p.c - 1.0;
}

inline RegionTags region_classify(const Params& p, double sup_bound) {
  if (p.c <= 2.0) throw subcritical_speed_error(p.c);
  const Certificate cert = certify_stability(p, 0.5 * p.c, sup_bound);
  return {cert.feasible, sup_bound < uniqueness_threshold(p)};
}

struct RegionRow {
  double h, c, lambda, beta, R, delta;
  bool stable, unique_tag;
};

struct RegionLattice {
  double h0 = 0.0, h1 = 3.0, dh = 0.05;
  double c0 = 2.0, c1 = 5.0, dc = 0.05;
  double sup_bound = -1.0;  // <= 0 means automatic e^{ch}
};

// Rectangular (h, c) scan at lambda = c/2.  Cells with c <= 2 are skipped
// (certificate undefined there).  Cells are distributed over a worker pool;
// the output ordering is by (h, then c) regardless of scheduling.
inline std::vector<RegionRow> region_scan(const RegionLattice& lat) {
  if (!(lat.dh > 0.0) || !(lat.dc > 0.0))
    throw invalid_config_error("region_scan: lattice steps must be positive");
  std::vector<std::pair<double, double>> cells;
  const int nh = static_cast<int>(std::floor((lat.h1 - lat.h0) / lat.dh + 1e-9)) + 1;
  const int nc = static_cast<int>(std::floor((lat.c1 - lat.c0) / lat.dc + 1e-9)) + 1;
  for (int i = 0; i < nh; ++i)
    for (int j = 0; j < nc; ++j) {
      const double h = lat.h0 + i * lat.dh;
      const double c = lat.c0 + j * lat.dc;
      if (c > 2.0 + 1e-12) cells.emplace_back(h, c);
    }

  std::vector<RegionRow> rows(cells.size());
  const auto eval_range = [&](size_t begin, size_t end) {
    for (size_t k = begin; k < end; ++k) {
      const auto [h, c] = cells[k];
      const Params p{c, h};
      const double sup = lat.sup_bound > 0.0 ? lat.sup_bound : std::exp(p.ch());
      const Certificate cert = certify_stability(p, 0.5 * c, sup);
      const bool uniq = sup < uniqueness_threshold(p);
      rows[k] = {h, c, cert.lambda, cert.beta, cert.R, cert.delta, cert.feasible, uniq};
    }
  };

  const size_t workers = std::max(1u, std::thread::hardware_concurrency());
  const size_t chunk = (cells.size() + workers - 1) / std::max<size_t>(workers, 1);
  std::vector<std::future<void>> tasks;
  for (size_t begin = 0; begin < cells.size(); begin += chunk)
    tasks.push_back(std::async(std::launch::async, eval_range, begin,
                               std::min(begin + chunk, cells.size())));
  for (auto& t : tasks) t.get();
  return rows;
}

}  // namespace semiwave::dispersion
