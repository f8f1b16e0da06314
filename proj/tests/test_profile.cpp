#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include <semiwave/evolution.hpp>
#include <semiwave/profile.hpp>

using namespace semiwave;
using doctest::Approx;

namespace {

profile::Profile quick_profile(double c, double h, double dz = 0.04) {
  profile::ProfileOptions po;
  po.dz = dz;
  return profile::compute_profile(Params{c, h}, po);
}

}  // namespace

TEST_CASE("computed profile satisfies the front invariants") {
  const Params p{3.0, 1.0};
  const auto pr = quick_profile(3.0, 1.0);

  CHECK(pr.values.minCoeff() >= -1e-12);
  CHECK(pr.values.maxCoeff() <= profile::hutchinson_bound(p) * (1.0 + 1e-6));
  CHECK(pr.values.maxCoeff() > 1.0);  // delayed fronts overshoot the plateau
  CHECK(pr.ode_residual <= 1e-9);

  // grid convention: the strip spans [z0 - ch, z0] and carries pure tail data
  CHECK(pr.strip == pr.grid.shift_cells(p) + 1);
  const auto roots = dispersion::char_roots(p);
  const double z0 = std::log(1e-8) / roots.lambda1;
  CHECK(pr.grid.z_min == Approx(z0 - p.ch()).epsilon(1e-12));
  for (int i = 0; i < pr.strip; ++i)
    CHECK(pr.values[i] == Approx(std::exp(roots.lambda1 * pr.grid.z(i))).epsilon(1e-12));

  // fitted tail decay matches the slow characteristic root
  CHECK(pr.tail.exponent == Approx(roots.lambda1).epsilon(0.02));
  CHECK(pr.tail.amplitude == Approx(1.0).epsilon(0.05));

  // the sup of the (3,1) front, from the fine-grid solve, to grid accuracy
  CHECK(pr.values.maxCoeff() == Approx(1.22408460283741).epsilon(2e-3));
}

TEST_CASE("h = 0 front is monotone with a flat plateau") {
  // 1 - phi decays like e^{-0.35 z} past the rise (root of the plateau
  // linearization at c = 2.5), so the window must outrun the ~37-unit rise
  // before the last couple of units sit within 1e-3 of the plateau
  profile::ProfileOptions po;
  po.dz = 0.04;
  po.zlen = 70.0;
  const auto pr = profile::compute_profile(Params{2.5, 0.0}, po);
  CHECK(pr.strip == 1);
  for (int i = 1; i < pr.grid.n; ++i) CHECK(pr.values[i] >= pr.values[i - 1] - 1e-10);
  const int last = static_cast<int>(std::lround(2.0 / pr.grid.dz));
  CHECK((pr.values.tail(last) - 1.0).abs().maxCoeff() <= 1e-3);
}

TEST_CASE("profile options are validated") {
  CHECK_THROWS_AS(profile::compute_profile(Params{2.0, 0.0}), invalid_config_error);
  profile::ProfileOptions po;
  po.depth = 1e-3;  // too shallow for a pure-mode strip
  CHECK_THROWS_AS(profile::compute_profile(Params{3.0, 1.0}, po), invalid_config_error);
  po.depth = 1e-8;
  po.amplitude = 0.0;
  CHECK_THROWS_AS(profile::compute_profile(Params{3.0, 1.0}, po), invalid_config_error);
}

TEST_CASE("tail state: pure-mode seed and preconditions") {
  const Params p{3.0, 1.0};
  const auto roots = dispersion::char_roots(p);
  const double z0 = std::log(1e-8) / roots.lambda1;
  const auto s = profile::tail_init(p, 1.0, z0, 0.05);

  CHECK(s.phi0 == Approx(1e-8).epsilon(1e-9));
  CHECK(s.dphi0 == Approx(roots.lambda1 * s.phi0).epsilon(1e-12));
  REQUIRE(s.history.size() == std::llround(p.ch() / 0.05) + 1);
  CHECK(s.history[0] == Approx(std::exp(roots.lambda1 * (z0 - p.ch()))).epsilon(1e-12));
  CHECK(s.history[s.history.size() - 1] == Approx(s.phi0).epsilon(1e-12));

  CHECK_THROWS_AS(profile::tail_init(Params{2.05, 0.0}, 1.0, z0, 0.05), invalid_config_error);
  CHECK_THROWS_AS(profile::tail_init(p, -1.0, z0, 0.05), invalid_config_error);
  CHECK_THROWS_AS(profile::tail_init(p, 1.0, -2.0, 0.05), invalid_config_error);  // too shallow
}

TEST_CASE("forward marching tracks a computed front over a short stretch") {
  const auto pr = quick_profile(3.0, 1.0);
  const Grid& g = pr.grid;

  // start mid-rise and march two length units on a grid truncated right
  // there: the fast mode roughly doubles every 1/lambda2 units, so marching
  // much past the stretch under comparison only feeds the blow-up detector
  int start = 0;
  while (g.z(start) < 0.0) ++start;
  const int stretch = static_cast<int>(std::lround(2.0 / g.dz));
  const Grid sub{g.z_min, start + stretch + 1, g.dz};
  Array init = Array::Zero(sub.n);
  init.head(start + 1) = pr.values.head(start + 1);
  const double dphi = (pr.values[start + 1] - pr.values[start - 1]) / (2.0 * g.dz);

  const Array marched = profile::march_from(pr.params, sub, init, start, dphi);
  const double sup = pr.values.maxCoeff();
  double worst = 0.0;
  for (int i = start; i <= start + stretch; ++i)
    worst = std::max(worst, std::abs(marched[i] - pr.values[i]));
  CHECK(worst <= 0.05 * sup);
}

TEST_CASE("forward marching from the deep tail blows up (regression)") {
  // the e^{lambda2 z} mode amplifies seed truncation error over the tail
  // gauntlet; the blow-up detector must catch it rather than return garbage
  const Params p{3.0, 1.0};
  profile::ProfileOptions po;
  const auto roots = dispersion::char_roots(p);
  const double z0 = std::log(1e-8) / roots.lambda1;
  const Grid g = make_grid(p, z0 - p.ch(), p.ch() + 60.0, 0.02);
  const auto tail = profile::tail_init(p, 1.0, z0, g.dz);
  CHECK_THROWS_AS(profile::march_steps(p, g, tail), numerical_abort_error);
}

TEST_CASE("march_steps validates the history length") {
  const Params p{3.0, 1.0};
  const Grid g = make_grid(p, -10.0, 20.0, 0.1);
  profile::TailState bad;
  bad.history = Array::Zero(5);
  CHECK_THROWS_AS(profile::march_steps(p, g, bad), invalid_config_error);
}

TEST_CASE("relaxation flow: equilibria are terminal states") {
  const Params p{3.0, 1.0};
  const Grid g = make_grid(p, -10.0, 20.0, 0.1);
  for (double level : {0.0, 1.0}) {
    const Field seed{g, Array::Constant(g.n, level)};
    const Field f = profile::relax_profile(p, g, seed);
    CHECK((f.values - level).abs().maxCoeff() <= 1e-10);
  }
  CHECK_THROWS_AS(profile::relax_profile(p, g, Field{g, Array::Constant(g.n, -0.5)}),
                  invalid_config_error);
}

TEST_CASE("relaxation flow returns a perturbed front to the Newton front") {
  const auto pr = quick_profile(3.0, 1.0, 0.05);
  const Grid& g = pr.grid;
  const Array zs = g.zs();
  const Array bump = 0.05 * (-((zs - 2.0) / 2.0).square()).exp();
  const Field seed{g, (pr.values + bump).eval()};

  const Field relaxed = profile::relax_profile(pr.params, g, seed);
  CHECK((relaxed.values - pr.values).abs().maxCoeff() <= 5e-3);
}

TEST_CASE("profile is stationary under the co-moving evolution") {
  const auto pr = quick_profile(3.0, 1.0, 0.05);
  auto cfg = evolution::make_config(pr.params, pr.grid, 1.0, pr.values[0],
                                    evolution::Frame::moving);
  const int slots = evolution::ring_slots(pr.params, cfg);
  Array last;
  evolution::run(pr.params, pr.grid, cfg, std::vector<Array>(slots, pr.values),
                 [&](double, const Array& v) { last = v; });
  CHECK((last - pr.values).abs().maxCoeff() <= 1e-8);
}

TEST_CASE("independently seeded fronts align by their tail amplitudes") {
  const auto a = quick_profile(3.0, 1.0);
  profile::ProfileOptions po;
  po.dz = 0.04;
  po.amplitude = 2.0;
  const auto b = profile::compute_profile(Params{3.0, 1.0}, po);

  const auto roots = dispersion::char_roots(a.params);
  const auto al = profile::align_profiles(a, b);
  CHECK(al.shift == Approx(std::log(1.0 / 2.0) / roots.lambda1).epsilon(5e-3));
  CHECK(al.sup_difference <= 5e-3);

  // self-alignment is the identity
  const auto self = profile::align_profiles(a, a);
  CHECK(std::abs(self.shift) <= 1e-12);
  CHECK(self.sup_difference <= 1e-12);

  const auto other = quick_profile(3.0, 0.5);
  CHECK_THROWS_AS(profile::align_profiles(a, other), invalid_config_error);
}

TEST_CASE("ode residual measure is small only for solved fronts") {
  const auto pr = quick_profile(3.0, 0.5);
  const auto [resid, scale] = profile::measure_ode_residual(pr);
  CHECK(resid <= 1e-9);
  CHECK(scale > 0.0);

  profile::Profile junk = pr;
  junk.values = (junk.grid.zs() * 0.1).sin().abs();
  const auto [bad_resid, bad_scale] = profile::measure_ode_residual(junk);
  CHECK(bad_resid > 1e-2);
  (void)bad_scale;
}
