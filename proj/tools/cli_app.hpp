#pragma once

// Batch front end.  Each subcommand validates its flags, echoes the full
// config as JSON into a per-run directory (named from a hash of that config,
// so identical invocations land in identical paths with identical bytes), and
// writes its artifacts there.
//
// Exit codes: 0 success, 2 invalid config, 3 numerical abort, 4 certificate
// infeasible where feasibility was required.

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "semiwave/dispersion.hpp"
#include "semiwave/evolution.hpp"
#include "semiwave/grid.hpp"
#include "semiwave/io.hpp"
#include "semiwave/norms.hpp"
#include "semiwave/params.hpp"
#include "semiwave/picard.hpp"
#include "semiwave/profile.hpp"

namespace semiwave::cli {

namespace fs = std::filesystem;
using io::json;

inline fs::path prepare_run_dir(const json& cfg, const std::string& override_dir) {
  const std::string cmd = cfg.at("command").get<std::string>();
  const fs::path dir = override_dir.empty()
                           ? fs::path("runs") / (cmd + "-" + io::hash_tag(cfg.dump()))
                           : fs::path(override_dir);
  fs::create_directories(dir);
  io::write_json(dir / "config.json", cfg);
  return dir;
}

inline double parse_sup_bound(const std::string& s, const Params& p) {
  if (s == "auto") return std::exp(p.ch());
  try {
    size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw invalid_config_error("--sup-bound expects a number or 'auto', got '" + s + "'");
  }
}

// ---------------------------------------------------------------- profile

struct ProfileOpts {
  double c = 3.0, h = 1.0;
  double dz = 0.02, depth = 1e-8, amplitude = 1.0, zlen = 0.0;
  std::string out;
};

inline int cmd_profile(const ProfileOpts& o) {
  if (o.c < 2.0) throw subcritical_speed_error(o.c);
  const Params p{o.c, o.h};
  const json cfg = {{"command", "profile"}, {"c", o.c},         {"h", o.h},
                    {"dz", o.dz},           {"depth", o.depth}, {"amplitude", o.amplitude},
                    {"zlen", o.zlen}};
  const fs::path dir = prepare_run_dir(cfg, o.out);

  profile::ProfileOptions po;
  po.amplitude = o.amplitude;
  po.depth = o.depth;
  po.dz = o.dz;
  po.zlen = o.zlen;
  const auto pr = profile::compute_profile(p, po);

  io::write_profile_csv(dir / "profile.csv", pr.grid, pr.values);
  const json sidecar = {
      {"params", {{"c", p.c}, {"h", p.h}}},
      {"grid", {{"z_min", pr.grid.z_min}, {"dz", pr.grid.dz}, {"n", pr.grid.n}}},
      {"strip", pr.strip},
      {"sup", pr.values.maxCoeff()},
      {"min", pr.values.minCoeff()},
      {"ode_residual", pr.ode_residual},
      {"tail",
       {{"amplitude", pr.tail.amplitude},
        {"exponent", pr.tail.exponent},
        {"power", pr.tail.power},
        {"window", {pr.tail.window_lo, pr.tail.window_hi}},
        {"residual", pr.tail.residual}}}};
  io::write_json(dir / "profile.json", sidecar);

  const auto roots = dispersion::char_roots(p);
  std::cout << "profile c=" << io::fmt(p.c) << " h=" << io::fmt(p.h) << ": n=" << pr.grid.n
            << " dz=" << io::fmt(pr.grid.dz) << "\n"
            << "  sup phi = " << io::fmt(pr.values.maxCoeff())
            << "  (a priori bound e^{ch} = " << io::fmt(profile::hutchinson_bound(p)) << ")\n"
            << "  tail slope = " << io::fmt(pr.tail.exponent)
            << "  (lambda1 = " << io::fmt(roots.lambda1) << ")\n"
            << "  ode residual = " << io::fmt(pr.ode_residual) << "\n"
            << "  wrote " << (dir / "profile.csv").string() << "\n";
  return 0;
}

// ---------------------------------------------------------------- certify

struct CertifyOpts {
  double c = 3.0, h = 1.0, lambda = 1.5;
  std::string sup_bound = "auto";
  bool require_feasible = false;
  std::string out;
};

inline int cmd_certify(const CertifyOpts& o) {
  if (o.c < 2.0) throw subcritical_speed_error(o.c);
  const Params p{o.c, o.h};
  const double sup = parse_sup_bound(o.sup_bound, p);
  const json cfg = {{"command", "certify"},
                    {"c", o.c},
                    {"h", o.h},
                    {"lambda", o.lambda},
                    {"sup_bound", o.sup_bound},
                    {"require_feasible", o.require_feasible}};
  const fs::path dir = prepare_run_dir(cfg, o.out);

  const auto cert = dispersion::certify_stability(p, o.lambda, sup);
  bool m_ok = false;
  if (cert.feasible && p.h > 0.0) m_ok = norms::m_function_check(p, cert.lambda, cert.delta, cert.R);

  json j = {{"c", p.c},
            {"h", p.h},
            {"lambda", cert.lambda},
            {"beta", cert.beta},
            {"sup_bound", cert.sup_bound},
            {"R", cert.R},
            {"feasible", cert.feasible},
            {"delta", nullptr},
            {"m_nonincreasing", nullptr}};
  if (cert.feasible) {
    j["delta"] = cert.delta;
    if (p.h > 0.0) j["m_nonincreasing"] = m_ok;
  }
  io::write_json(dir / "certificate.json", j);

  std::cout << "certify c=" << io::fmt(p.c) << " h=" << io::fmt(p.h)
            << " lambda=" << io::fmt(o.lambda) << ": beta = " << io::fmt(cert.beta)
            << ", R = " << io::fmt(cert.R) << "\n";
  if (cert.feasible)
    std::cout << "  feasible, delta = " << io::fmt(cert.delta) << "\n";
  else
    std::cout << "  infeasible (R > beta)\n";
  std::cout << "  wrote " << (dir / "certificate.json").string() << "\n";

  if (o.require_feasible && !cert.feasible)
    throw infeasible_error("certificate infeasible: R = " + io::fmt(cert.R) + " > beta = " +
                           io::fmt(cert.beta) + " at lambda = " + io::fmt(o.lambda));
  return 0;
}

// ---------------------------------------------------------------- stability

struct StabilityOpts {
  double c = 3.0, h = 1.0, lambda = 1.5;
  double amplitude = 0.1, center = 0.0, width = 2.0;
  double dz = 0.05, T = 15.0, slack = 0.05, fit_start = 1.0, inset = 5.0;
  int probe_every = 10;
  std::string out;
};

inline int cmd_stability(const StabilityOpts& o) {
  if (o.c < 2.0) throw subcritical_speed_error(o.c);
  const Params p{o.c, o.h};
  const json cfg = {{"command", "stability"},
                    {"c", o.c},
                    {"h", o.h},
                    {"lambda", o.lambda},
                    {"amplitude", o.amplitude},
                    {"center", o.center},
                    {"width", o.width},
                    {"dz", o.dz},
                    {"T", o.T},
                    {"slack", o.slack},
                    {"fit_start", o.fit_start},
                    {"inset", o.inset},
                    {"probe_every", o.probe_every}};
  const fs::path dir = prepare_run_dir(cfg, o.out);

  const auto cert = dispersion::certify_stability(p, o.lambda, std::exp(p.ch()));
  if (!cert.feasible)
    throw infeasible_error("stability run needs a feasible certificate; R = " + io::fmt(cert.R) +
                           " > beta = " + io::fmt(cert.beta));

  profile::ProfileOptions po;
  po.dz = o.dz;
  const auto pr = profile::compute_profile(p, po);
  auto window = norms::default_window(pr.grid, o.inset);
  // cap the weight over the window: e^{-lambda z} <= 1e6 keeps the integrator's
  // roundoff floor (~1e-13) below 1e-7 in the weighted sup, invisible next to
  // the smallest certificate level the run can reach
  window.z_lo = std::max(window.z_lo, -std::log(1e6) / o.lambda);

  const Array zs = pr.grid.zs();
  const Array bump = o.amplitude * (-((zs - o.center) / o.width).square()).exp();
  const Array v0 = pr.values + bump;
  const double K = norms::weighted_norm(pr.grid, bump, o.lambda, window);

  auto ecfg = evolution::make_config(p, pr.grid, o.T, pr.values[0], evolution::Frame::moving);
  // hold the profile's delay strip fixed: it is pure tail mode, the bump is
  // zero there to double precision, and freezing it pins the front position
  // the way the whole-line tail does
  ecfg.pin_cells = (p.h > 0.0 ? pr.grid.shift_cells(p) : 0) + 1;
  const int slots = evolution::ring_slots(p, ecfg);

  std::vector<double> pt, pw, ps;
  long idx = 0;
  const long every = std::max(1, o.probe_every);
  const auto probe = [&](double t, const Array& v) {
    if (idx % every == 0) {
      pt.push_back(t);
      pw.push_back(norms::weighted_norm(pr.grid, (v - pr.values).eval(), o.lambda, window));
      ps.push_back((v - pr.values).abs().maxCoeff());
    }
    ++idx;
  };
  evolution::run(p, pr.grid, ecfg, std::vector<Array>(slots, v0), probe);

  norms::WeightedSeries series{o.lambda, window, pt, pw};
  const auto report = norms::verify_iterative_bound(series, K, cert.delta, p.h, o.slack);
  const auto [delta_hat, r2] = norms::fit_decay_rate(series, o.fit_start);

  io::write_probes_csv(dir / "probes.csv", pt, pw, ps);
  io::write_series_csv(dir / "series.csv", pt, pw);
  json intervals = json::array();
  for (const auto& iv : report.per_interval)
    intervals.push_back({{"k", iv.k}, {"C_k", iv.C_k}, {"measured", iv.measured}});
  const json rep = {{"c", p.c},
                    {"h", p.h},
                    {"lambda", o.lambda},
                    {"K", K},
                    {"delta", cert.delta},
                    {"slack", o.slack},
                    {"window", {window.z_lo, window.z_hi}},
                    {"pass", report.pass},
                    {"delta_hat", delta_hat},
                    {"r2", r2},
                    {"intervals", intervals}};
  io::write_json(dir / "report.json", rep);

  std::cout << "stability c=" << io::fmt(p.c) << " h=" << io::fmt(p.h)
            << " lambda=" << io::fmt(o.lambda) << ": delta = " << io::fmt(cert.delta)
            << ", K = " << io::fmt(K) << "\n"
            << "  iterative bound: " << (report.pass ? "pass" : "FAIL") << " (slack "
            << io::fmt(o.slack) << ")\n"
            << "  fitted decay rate = " << io::fmt(delta_hat) << " (r2 = " << io::fmt(r2) << ")\n"
            << "  wrote " << (dir / "report.json").string() << "\n";
  return 0;
}

// ---------------------------------------------------------------- region

struct RegionOpts {
  double h0 = 0.0, h1 = 3.0, dh = 0.05;
  double c0 = 2.0, c1 = 5.0, dc = 0.05;
  std::string sup_bound = "auto";
  std::string out;
};

inline int cmd_region(const RegionOpts& o) {
  const json cfg = {{"command", "region"}, {"h0", o.h0}, {"h1", o.h1},
                    {"dh", o.dh},          {"c0", o.c0}, {"c1", o.c1},
                    {"dc", o.dc},          {"sup_bound", o.sup_bound}};
  const fs::path dir = prepare_run_dir(cfg, o.out);

  dispersion::RegionLattice lat;
  lat.h0 = o.h0;
  lat.h1 = o.h1;
  lat.dh = o.dh;
  lat.c0 = o.c0;
  lat.c1 = o.c1;
  lat.dc = o.dc;
  lat.sup_bound = o.sup_bound == "auto" ? -1.0 : parse_sup_bound(o.sup_bound, Params{3.0, 0.0});
  const auto rows = dispersion::region_scan(lat);

  long n_stable = 0, n_unique = 0;
  for (const auto& r : rows) {
    n_stable += r.stable;
    n_unique += r.unique_tag;
  }
  io::write_region_csv(dir / "region.csv", rows);
  std::cout << "region scan: " << rows.size() << " cells, " << n_stable << " stable, " << n_unique
            << " unique\n"
            << "  wrote " << (dir / "region.csv").string() << "\n";
  return 0;
}

// ---------------------------------------------------------------- oracle

struct OracleOpts {
  double c = 3.0, h = 1.0;
  double dz = 0.05, dx = 0.0125, dt_oracle = 0.0;
  double xmin = -15.0, xmax = 15.0;
  std::string datum = "bump";
  double amplitude = 0.5, width = 3.0;
  double inset = 5.0;
  std::string out;
};

inline int cmd_oracle(const OracleOpts& o) {
  const Params p{o.c, o.h};
  if (!(p.h > 0.0)) throw invalid_config_error("oracle: needs h > 0 (one delay interval)");
  if (o.datum != "bump" && o.datum != "one" && o.datum != "zero")
    throw invalid_config_error("oracle: --datum must be bump, one, or zero");
  const json cfg = {{"command", "oracle"},
                    {"c", o.c},
                    {"h", o.h},
                    {"dz", o.dz},
                    {"dx", o.dx},
                    {"dt_oracle", o.dt_oracle},
                    {"xmin", o.xmin},
                    {"xmax", o.xmax},
                    {"datum", o.datum},
                    {"amplitude", o.amplitude},
                    {"width", o.width},
                    {"inset", o.inset}};
  const fs::path dir = prepare_run_dir(cfg, o.out);

  // evolution grid, then an oracle grid refining it r-fold so nodes coincide
  const Grid ge = make_grid(p, o.xmin, o.xmax - o.xmin, o.dz);
  const int r = std::max(1, static_cast<int>(std::llround(ge.dz / o.dx)));
  const Grid gx{ge.z_min, (ge.n - 1) * r + 1, ge.dz / r};

  const auto datum_at = [&](double x) -> double {
    if (o.datum == "one") return 1.0;
    if (o.datum == "zero") return 0.0;
    return o.amplitude * std::exp(-(x / o.width) * (x / o.width));
  };
  Array u0e(ge.n), u0x(gx.n);
  for (int i = 0; i < ge.n; ++i) u0e[i] = datum_at(ge.z(i));
  for (int i = 0; i < gx.n; ++i) u0x[i] = datum_at(gx.z(i));

  const double dto = o.dt_oracle > 0.0 ? o.dt_oracle : gx.dz;
  const int N = std::max(3, static_cast<int>(std::llround(p.h / dto)));
  const auto sol = picard::picard_solve(p, gx, std::vector<Array>(N + 1, u0x));
  const auto grad = picard::lipschitz_growth_check(gx, std::vector<Array>(N + 1, u0x), sol);

  auto ecfg = evolution::make_config(p, ge, p.h, u0e[0], evolution::Frame::original);
  const long nsteps = std::lround(p.h / ecfg.dt);
  ecfg.snapshot_every = static_cast<int>(nsteps);
  const int slots = evolution::ring_slots(p, ecfg);
  const auto rec = evolution::run(p, ge, ecfg, std::vector<Array>(slots, u0e));
  const Array& ue = rec.snapshots.back();
  const Array& uo = sol.fields.back();

  double sup_error = 0.0;
  std::string csv = "x,evolution,oracle\n";
  for (int i = 0; i < ge.n; ++i) {
    const double x = ge.z(i);
    if (x < o.xmin + o.inset || x > o.xmax - o.inset) continue;
    const double d = std::abs(ue[i] - uo[i * r]);
    sup_error = std::max(sup_error, d);
    csv += io::fmt(x) + "," + io::fmt(ue[i]) + "," + io::fmt(uo[i * r]) + "\n";
  }
  io::write_text(dir / "compare.csv", csv);

  const json cmp = {{"sup_error", sup_error},
                    {"grid",
                     {{"dz", ge.dz},
                      {"dx", gx.dz},
                      {"dt_evolution", ecfg.dt},
                      {"dt_oracle", sol.dt},
                      {"x_min", ge.z_min},
                      {"x_max", ge.z_max()},
                      {"n_evolution", ge.n},
                      {"n_oracle", gx.n}}},
                    {"iterations", sol.iterations},
                    {"picard_final_diff", sol.final_diff},
                    {"gradient_bound_pass", grad.pass}};
  io::write_json(dir / "comparison.json", cmp);

  std::cout << "oracle c=" << io::fmt(p.c) << " h=" << io::fmt(p.h) << " datum=" << o.datum
            << ": sup error = " << io::fmt(sup_error) << " (picard iterations "
            << sol.iterations << ")\n"
            << "  wrote " << (dir / "comparison.json").string() << "\n";
  return 0;
}

// ---------------------------------------------------------------- uniqueness

struct UniquenessOpts {
  double c = 3.0, h = 1.0;
  double dz_a = 0.02, dz_b = 0.025;
  double amplitude_b = 3.0;
  std::string out;
};

inline int cmd_uniqueness(const UniquenessOpts& o) {
  if (o.c < 2.0) throw subcritical_speed_error(o.c);
  const Params p{o.c, o.h};
  const json cfg = {{"command", "uniqueness"}, {"c", o.c},
                    {"h", o.h},                {"dz_a", o.dz_a},
                    {"dz_b", o.dz_b},          {"amplitude_b", o.amplitude_b}};
  const fs::path dir = prepare_run_dir(cfg, o.out);

  profile::ProfileOptions pa, pb;
  pa.dz = o.dz_a;
  pb.dz = o.dz_b;
  pb.amplitude = o.amplitude_b;
  const auto a = profile::compute_profile(p, pa);
  const auto b = profile::compute_profile(p, pb);
  const auto al = profile::align_profiles(a, b);

  const double q_star = dispersion::uniqueness_threshold(p);
  const double sup_bound = std::exp(p.ch());
  const double sup_phi = a.values.maxCoeff();

  const json j = {{"c", p.c},
                  {"h", p.h},
                  {"shift", al.shift},
                  {"sup_difference", al.sup_difference},
                  {"threshold",
                   {{"q_crit", q_star},
                    {"sup_bound", sup_bound},
                    {"unique", sup_bound < q_star},
                    {"sup_phi_measured", sup_phi},
                    {"unique_measured", sup_phi < q_star}}},
                  {"profiles",
                   {{"a", {{"dz", a.grid.dz}, {"tail_amplitude", a.tail.amplitude}}},
                    {"b", {{"dz", b.grid.dz}, {"tail_amplitude", b.tail.amplitude}}}}}};
  io::write_json(dir / "alignment.json", j);

  std::cout << "uniqueness c=" << io::fmt(p.c) << " h=" << io::fmt(p.h) << ": shift = "
            << io::fmt(al.shift) << ", sup difference = " << io::fmt(al.sup_difference) << "\n"
            << "  threshold: sup bound " << io::fmt(sup_bound) << " vs Q* = " << io::fmt(q_star)
            << " -> unique = " << (sup_bound < q_star ? "true" : "false") << "\n"
            << "  wrote " << (dir / "alignment.json").string() << "\n";
  return 0;
}

// ---------------------------------------------------------------- driver

inline int run_cli(std::vector<std::string> args) {
  CLI::App app{"numerical laboratory for semi-wavefronts of the delayed Fisher-KPP equation"};
  app.name("semiwave");
  app.require_subcommand(1);
  // --h is the delay flag, so the help flag keeps only its long form
  app.set_help_flag("--help", "print help and exit");
  const auto sub = [&](const std::string& name, const std::string& desc) {
    auto* s = app.add_subcommand(name, desc);
    s->set_help_flag("--help", "print help and exit");
    return s;
  };
  int rc = 0;

  ProfileOpts po;
  auto* cp = sub("profile", "compute a semi-wavefront profile");
  cp->add_option("--c", po.c, "wave speed (>= 2.1)")->required();
  cp->add_option("--h", po.h, "delay")->required();
  cp->add_option("--dz", po.dz, "mesh size")->capture_default_str();
  cp->add_option("--depth", po.depth, "tail depth pinned at the strip end")->capture_default_str();
  cp->add_option("--amplitude", po.amplitude, "tail amplitude A")->capture_default_str();
  cp->add_option("--zlen", po.zlen, "domain length right of the strip (0 = auto)")
      ->capture_default_str();
  cp->add_option("--out", po.out, "output directory (default: runs/<hash>)");
  cp->callback([&] { rc = cmd_profile(po); });

  CertifyOpts co;
  auto* cc = sub("certify", "evaluate the stability certificate");
  cc->add_option("--c", co.c, "wave speed")->required();
  cc->add_option("--h", co.h, "delay")->required();
  cc->add_option("--lambda", co.lambda, "weight exponent in (lambda1, lambda2)")->required();
  cc->add_option("--sup-bound", co.sup_bound, "sup bound on the profile, or 'auto' (= e^{ch})")
      ->capture_default_str();
  cc->add_flag("--require-feasible", co.require_feasible, "exit 4 when infeasible");
  cc->add_option("--out", co.out, "output directory");
  cc->callback([&] { rc = cmd_certify(co); });

  StabilityOpts so;
  auto* cs = sub("stability", "perturbed run + iterative bound verification");
  cs->add_option("--c", so.c, "wave speed")->required();
  cs->add_option("--h", so.h, "delay")->required();
  cs->add_option("--lambda", so.lambda, "weight exponent")->required();
  cs->add_option("--amplitude", so.amplitude, "bump amplitude")->capture_default_str();
  cs->add_option("--center", so.center, "bump center")->capture_default_str();
  cs->add_option("--width", so.width, "bump width")->capture_default_str();
  cs->add_option("--dz", so.dz, "mesh size")->capture_default_str();
  cs->add_option("--T", so.T, "final time")->capture_default_str();
  cs->add_option("--slack", so.slack, "relative slack on the bound")->capture_default_str();
  cs->add_option("--fit-start", so.fit_start, "start time of the decay-rate fit")
      ->capture_default_str();
  cs->add_option("--inset", so.inset, "window inset from the domain ends")->capture_default_str();
  cs->add_option("--probe-every", so.probe_every, "record every k-th step")->capture_default_str();
  cs->add_option("--out", so.out, "output directory");
  cs->callback([&] { rc = cmd_stability(so); });

  RegionOpts ro;
  auto* cr = sub("region", "(h, c) certificate map at lambda = c/2");
  cr->add_option("--h0", ro.h0, "delay range start")->capture_default_str();
  cr->add_option("--h1", ro.h1, "delay range end")->capture_default_str();
  cr->add_option("--dh", ro.dh, "delay step")->capture_default_str();
  cr->add_option("--c0", ro.c0, "speed range start (cells with c <= 2 are skipped)")
      ->capture_default_str();
  cr->add_option("--c1", ro.c1, "speed range end")->capture_default_str();
  cr->add_option("--dc", ro.dc, "speed step")->capture_default_str();
  cr->add_option("--sup-bound", ro.sup_bound, "profile sup bound, or 'auto' (= e^{ch} per cell)")
      ->capture_default_str();
  cr->add_option("--out", ro.out, "output directory");
  cr->callback([&] { rc = cmd_region(ro); });

  OracleOpts oo;
  auto* cx = sub("oracle", "evolution vs integral-equation oracle on [0, h]");
  cx->add_option("--c", oo.c, "wave speed")->required();
  cx->add_option("--h", oo.h, "delay (> 0)")->required();
  cx->add_option("--dz", oo.dz, "evolution mesh")->capture_default_str();
  cx->add_option("--dx", oo.dx, "oracle mesh (refines --dz)")->capture_default_str();
  cx->add_option("--dt-oracle", oo.dt_oracle, "oracle time step (0 = match dx)")
      ->capture_default_str();
  cx->add_option("--xmin", oo.xmin, "window start")->capture_default_str();
  cx->add_option("--xmax", oo.xmax, "window end")->capture_default_str();
  cx->add_option("--datum", oo.datum, "initial datum: bump | one | zero")->capture_default_str();
  cx->add_option("--amplitude", oo.amplitude, "bump amplitude")->capture_default_str();
  cx->add_option("--width", oo.width, "bump width")->capture_default_str();
  cx->add_option("--inset", oo.inset, "comparison window inset")->capture_default_str();
  cx->add_option("--out", oo.out, "output directory");
  cx->callback([&] { rc = cmd_oracle(oo); });

  UniquenessOpts uo;
  auto* cu = sub("uniqueness", "align two independently computed profiles");
  cu->add_option("--c", uo.c, "wave speed")->required();
  cu->add_option("--h", uo.h, "delay")->required();
  cu->add_option("--dz-a", uo.dz_a, "mesh of profile a")->capture_default_str();
  cu->add_option("--dz-b", uo.dz_b, "mesh of profile b")->capture_default_str();
  cu->add_option("--amplitude-b", uo.amplitude_b, "tail amplitude of profile b")
      ->capture_default_str();
  cu->add_option("--out", uo.out, "output directory");
  cu->callback([&] { rc = cmd_uniqueness(uo); });

  try {
    std::reverse(args.begin(), args.end());
    app.parse(std::move(args));
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  } catch (const invalid_config_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const infeasible_error& e) {
    std::cerr << "infeasible: " << e.what() << "\n";
    return 4;
  } catch (const numerical_abort_error& e) {
    std::cerr << "numerical abort: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return rc;
}

}  // namespace semiwave::cli
