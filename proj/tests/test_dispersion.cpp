#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "semiwave/dispersion.hpp"

using namespace semiwave;
using namespace semiwave::dispersion;

namespace {
constexpr double kLambda1C3 = 0.3819660112501055;   // (3 - sqrt(5)) / 2
constexpr double kLambda2C3 = 2.6180339887498945;   // (3 + sqrt(5)) / 2
constexpr double kDelta311 = -0.7687115336024133;   // root of e^{d}(d + 1.25) = e^{-1.5}
constexpr double kQ31Kappa = 609.2406435713658;     // e^7 * 5/9
constexpr double kKappa3H100 = 2.6147056244454694;
constexpr double kCross25 = 0.9205826318456989;     // ln(0.5625) / -0.625
}  // namespace

TEST_CASE("characteristic roots: double root at c = 2, golden pair at c = 3") {
  const auto r2 = char_roots(Params{2.0, 0.0});
  CHECK(r2.lambda1 == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(r2.lambda2 == doctest::Approx(1.0).epsilon(1e-14));

  const auto r3 = char_roots(Params{3.0, 1.0});
  CHECK(r3.lambda1 == doctest::Approx(kLambda1C3).epsilon(1e-15));
  CHECK(r3.lambda2 == doctest::Approx(kLambda2C3).epsilon(1e-15));
}

TEST_CASE("characteristic roots: Vieta identities hold to 1e-12 across c in [2, 10]") {
  for (double c = 2.0; c <= 10.0 + 1e-12; c += 0.01) {
    const auto r = char_roots(Params{c, 1.0});
    CHECK(std::abs(r.lambda1 * r.lambda2 - 1.0) <= 1e-12);
    CHECK(std::abs(r.lambda1 + r.lambda2 - c) <= 1e-12);
    CHECK(r.lambda1 <= r.lambda2);
  }
}

TEST_CASE("characteristic roots: subcritical speed rejected") {
  CHECK_THROWS_AS(char_roots(Params{1.9, 1.0}), subcritical_speed_error);
  CHECK_THROWS_AS(char_roots(Params{0.5, 0.0}), subcritical_speed_error);
}

TEST_CASE("decay coefficient: zero at the roots, maximal at c/2, symmetric") {
  const Params p{3.0, 1.0};
  const auto r = char_roots(p);
  CHECK(std::abs(decay_rate(p, r.lambda1)) <= 1e-12);
  CHECK(std::abs(decay_rate(p, r.lambda2)) <= 1e-12);
  CHECK(decay_rate(p, 1.5) == doctest::Approx(1.25).epsilon(1e-15));

  // beta(lambda) = beta(c - lambda); peak value c^2/4 - 1 at the midpoint
  for (double lam = 0.5; lam <= 1.5; lam += 0.1)
    CHECK(decay_rate(p, lam) == doctest::Approx(decay_rate(p, 3.0 - lam)).epsilon(1e-13));
  for (double lam = r.lambda1 + 0.01; lam <= r.lambda2 - 0.01; lam += 0.05)
    CHECK(decay_rate(p, lam) <= 1.25 + 1e-13);

  // negative outside (lambda1, lambda2)
  CHECK(decay_rate(p, 0.1) < 0.0);
  CHECK(decay_rate(p, 3.0) < 0.0);
}

TEST_CASE("Q: vanishes at the roots, frozen value at the interior maximum") {
  const Params p{3.0, 1.0};
  const auto r = char_roots(p);
  CHECK(std::abs(q_eval(p, r.lambda1)) <= 1e-9);
  CHECK(std::abs(q_eval(p, r.lambda2)) <= 1e-9);
  CHECK(q_eval(p, 7.0 / 3.0) == doctest::Approx(kQ31Kappa).epsilon(1e-12));
  CHECK_THROWS_AS(q_eval(p, 3.0), invalid_config_error);  // outside [lambda1, lambda2]
}

TEST_CASE("kappa_crit: closed form at (3,1); approaches lambda2 as h grows") {
  CHECK(std::abs(kappa_crit(Params{3.0, 1.0}) - 7.0 / 3.0) <= 1e-12);
  CHECK(kappa_crit(Params{2.0, 1.0}) == doctest::Approx(1.0).epsilon(1e-12));

  const double k100 = kappa_crit(Params{3.0, 100.0});
  CHECK(k100 == doctest::Approx(kKappa3H100).epsilon(1e-12));
  // gap to lambda2 scales like 1/(c h); at h = 100 it is ~3.3e-3
  CHECK(std::abs(k100 - kLambda2C3) <= 4e-3);
  CHECK(kappa_crit(Params{3.0, 1000.0}) > k100);

  CHECK_THROWS_AS(kappa_crit(Params{3.0, 0.0}), invalid_config_error);
  CHECK_THROWS_AS(kappa_crit(Params{1.5, 1.0}), subcritical_speed_error);

  // Q is unimodal with the maximum at kappa
  const Params p{3.0, 1.0};
  const double kappa = kappa_crit(p);
  CHECK(q_eval(p, kappa) > q_eval(p, kappa - 0.1));
  CHECK(q_eval(p, kappa) > q_eval(p, kappa + 0.1));
}

TEST_CASE("certificate: frozen delta values and the defining identity") {
  // delayed case
  const auto cert = certify_stability(Params{3.0, 1.0}, 1.5, std::exp(3.0));
  CHECK(cert.feasible);
  CHECK(cert.beta == doctest::Approx(1.25).epsilon(1e-15));
  CHECK(cert.R == doctest::Approx(std::exp(-1.5)).epsilon(1e-14));
  CHECK(cert.delta == doctest::Approx(kDelta311).epsilon(1e-9));
  CHECK(cert.delta >= -cert.beta);
  CHECK(cert.delta <= 0.0);
  // root is kept on the safe side: g(delta) >= R - 1e-10
  const double g = std::exp(cert.delta * 1.0) * (cert.delta + cert.beta);
  CHECK(g >= cert.R - 1e-10);
  CHECK(std::abs(g - cert.R) <= 1e-9);

  // h = 0 degenerates to delta = R - beta
  const auto c0 = certify_stability(Params{3.0, 0.0}, 1.5, 1.0);
  CHECK(c0.feasible);
  CHECK(c0.delta == doctest::Approx(-0.25).epsilon(1e-12));
}

TEST_CASE("certificate: infeasible when R exceeds beta") {
  // c = 2.5, lambda = c/2: R = e^{-0.625 h}, beta = 0.5625
  const auto cert = certify_stability(Params{2.5, 0.5}, 1.25, std::exp(2.5 * 0.5));
  CHECK_FALSE(cert.feasible);
  CHECK(std::isnan(cert.delta));

  const auto ok = certify_stability(Params{2.5, 1.0}, 1.25, std::exp(2.5));
  CHECK(ok.feasible);
}

TEST_CASE("certificate: delta grows with the sup bound") {
  const Params p{3.0, 1.0};
  double last = -10.0;
  for (double sup : {0.1, 1.0, 5.0, 20.0}) {
    const auto cert = certify_stability(p, 1.5, sup);
    REQUIRE(cert.feasible);
    CHECK(cert.delta > last);
    last = cert.delta;
  }
}

TEST_CASE("certificate: domain validation") {
  const Params p{3.0, 1.0};
  CHECK_THROWS_AS(certify_stability(p, 0.3, 1.0), invalid_config_error);   // <= lambda1
  CHECK_THROWS_AS(certify_stability(p, 2.7, 1.0), invalid_config_error);   // >= lambda2
  CHECK_THROWS_AS(certify_stability(p, 1.5, 0.0), invalid_config_error);   // sup <= 0
  CHECK_THROWS_AS(certify_stability(p, 1.5, -1.0), invalid_config_error);
}

TEST_CASE("uniqueness threshold: Q at kappa for h > 0, c^2/4 - 1 at h = 0, continuous") {
  CHECK(uniqueness_threshold(Params{3.0, 1.0}) == doctest::Approx(kQ31Kappa).epsilon(1e-12));
  CHECK(uniqueness_threshold(Params{3.0, 0.0}) == doctest::Approx(1.25).epsilon(1e-15));
  CHECK(uniqueness_threshold(Params{3.0, 1e-8}) == doctest::Approx(1.25).epsilon(1e-6));
}

TEST_CASE("region tags: spot checks evaluated numerically") {
  // (3, 1) with sup e^3: certificate feasible and e^3 below the Q threshold
  const auto t1 = region_classify(Params{3.0, 1.0}, std::exp(3.0));
  CHECK(t1.stable_at_half_c);
  CHECK(t1.unique);

  // (2.5, 4) with sup e^{10}: R = e^{-2.5} < beta = 0.5625, and Q(kappa) ~ 2.5e7 >> e^{10}
  const auto t2 = region_classify(Params{2.5, 4.0}, std::exp(10.0));
  CHECK(t2.stable_at_half_c);
  CHECK(t2.unique);
  CHECK(uniqueness_threshold(Params{2.5, 4.0}) > 1e7);

  CHECK_THROWS_AS(region_classify(Params{2.0, 1.0}, 1.0), subcritical_speed_error);
}

TEST_CASE("certificate crossover in h at c = 2.5 (frozen)") {
  // R(h) = e^{ch(1 - c/2)} decreases in h; feasible iff R <= beta, i.e. h >= h*
  const Params base{2.5, 0.0};
  const double beta = decay_rate(base, 1.25);
  CHECK(beta == doctest::Approx(0.5625).epsilon(1e-15));
  for (double h : {0.0, 0.25, 0.5, 0.75, 0.9, 0.95, 1.0, 2.0, 5.0}) {
    const Params p{2.5, h};
    const auto cert = certify_stability(p, 1.25, std::exp(p.ch()));
    const bool predicted = std::exp(p.ch() * (1.0 - 1.25)) <= beta;
    CHECK(cert.feasible == predicted);
    CHECK(cert.feasible == (h >= kCross25));
  }
}

TEST_CASE("region scan: ordering deterministic, c <= 2 absent, 2*sqrt(2) rule") {
  RegionLattice lat;
  lat.h0 = 0.0;
  lat.h1 = 1.0;
  lat.dh = 0.25;
  lat.c0 = 1.8;  // below-threshold cells must be skipped
  lat.c1 = 4.0;
  lat.dc = 0.1;
  const auto rows = region_scan(lat);
  REQUIRE(!rows.empty());
  for (const auto& r : rows) CHECK(r.c > 2.0);

  // stable whenever c > 2*sqrt(2) with the automatic e^{ch} bound
  for (const auto& r : rows)
    if (r.c > 2.0 * std::sqrt(2.0) + 1e-9) CHECK(r.stable);

  // rows sorted by (h, c); a second scan gives identical rows
  for (size_t i = 1; i < rows.size(); ++i) {
    const bool ordered =
        rows[i - 1].h < rows[i].h || (rows[i - 1].h == rows[i].h && rows[i - 1].c < rows[i].c);
    CHECK(ordered);
  }
  const auto rows2 = region_scan(lat);
  REQUIRE(rows2.size() == rows.size());
  for (size_t i = 0; i < rows.size(); ++i) {
    CHECK(rows[i].R == rows2[i].R);
    CHECK(rows[i].stable == rows2[i].stable);
    const bool both_nan = std::isnan(rows[i].delta) && std::isnan(rows2[i].delta);
    CHECK((both_nan || rows[i].delta == rows2[i].delta));
  }
}
