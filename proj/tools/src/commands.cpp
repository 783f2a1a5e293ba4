#include "carroll/cli/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <ostream>

#include "carroll/cli/acceptance.hpp"
#include "carroll/coherence.hpp"
#include "carroll/dft.hpp"
#include "carroll/dnls.hpp"
#include "carroll/duality.hpp"
#include "carroll/errors.hpp"
#include "carroll/kernels.hpp"
#include "carroll/propagator.hpp"

namespace carroll::cli {

namespace {

std::vector<double> linspace(double a, double b, long n) {
  if (n < 2) throw UsageError("need at least 2 points in a range");
  std::vector<double> v(static_cast<std::size_t>(n));
  for (long i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] = a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
  return v;
}

std::size_t positive(const RunConfig& cfg, const std::string& key) {
  const long v = cfg.get_int(key);
  if (v <= 0) throw UsageError("config: '" + key + "' must be positive");
  return static_cast<std::size_t>(v);
}

TemporalGrid grid_of(const RunConfig& cfg, const std::string& prefix) {
  try {
    return TemporalGrid(cfg.get_double(prefix + "_min"), cfg.get_double(prefix + "_max"),
                        positive(cfg, prefix + "_points"));
  } catch (const InvalidArgument& e) {
    throw UsageError(std::string("config: bad ") + prefix + " grid: " + e.what());
  }
}

// figures-two-body ---------------------------------------------------------

int cmd_figures_two_body(const RunConfig& cfg, OutputDir& out, std::ostream& log) {
  const auto p = params_of(cfg);
  const auto xs = linspace(cfg.get_double("x_min"), cfg.get_double("x_max"), cfg.get_int("x_points"));
  const auto ts = linspace(cfg.get_double("t_min"), cfg.get_double("t_max"), cfg.get_int("t_points"));
  const std::vector<std::string> grid_units{"time", "length", "length", "1/(length^2*time)"};

  CsvWriter rho(out.path("density_grid.csv"), {"t", "x1", "x2", "rho"}, grid_units);
  CsvWriter cur(out.path("current_grid.csv"), {"t", "x1", "x2", "J"},
                {"time", "length", "length", "1/(length^2*time)"});
  for (double t : cfg.get_list("times"))
    for (double x1 : xs)
      for (double x2 : xs) {
        const double x[2] = {x1, x2};
        rho.row({t, x1, x2, kernels::density_n(p, x, t)});
        cur.row({t, x1, x2, kernels::current_n(p, x, t)});
      }
  rho.close();
  cur.close();

  CsvWriter mrx(out.path("marginal_density_vs_x1.csv"), {"t", "x1", "rho1"}, {"time", "length", "1/(length*time)"});
  CsvWriter mjx(out.path("marginal_current_vs_x1.csv"), {"t", "x1", "J1"}, {"time", "length", "1/length"});
  for (double t : cfg.get_list("marginal_times")) {
    const auto m = kernels::one_body_marginals(p, xs, t);
    for (std::size_t i = 0; i < xs.size(); ++i) {
      mrx.row({t, xs[i], m.rho[i]});
      mjx.row({t, xs[i], m.current[i]});
    }
  }
  mrx.close();
  mjx.close();

  CsvWriter mrt(out.path("marginal_density_vs_t.csv"), {"x1", "t", "rho1"}, {"length", "time", "1/(length*time)"});
  CsvWriter mjt(out.path("marginal_current_vs_t.csv"), {"x1", "t", "J1"}, {"length", "time", "1/length"});
  for (double x1 : cfg.get_list("marginal_x1"))
    for (double t : ts) {
      const auto m = kernels::one_body_marginals(p, std::span<const double>(&x1, 1), t);
      mrt.row({x1, t, m.rho[0]});
      mjt.row({x1, t, m.current[0]});
    }
  mrt.close();
  mjt.close();
  log << "figures-two-body: wrote " << out.files().size() << " tables\n";
  return kOk;
}

// dnls -----------------------------------------------------------------------

int cmd_dnls(const RunConfig& cfg, OutputDir& out, std::ostream& log) {
  const double half = cfg.get_double("T_half_width");
  const TemporalGrid g(-half, half, positive(cfg, "T_points"));
  const double X_final = cfg.get_double("X_final");
  const auto snaps = positive(cfg, "snapshots");
  if (snaps < 2 || !(X_final > 0)) throw UsageError("dnls: need snapshots >= 2 and X_final > 0");
  double dX = cfg.get_double("dX");
  if (dX <= 0) dX = g.dt() * g.dt() / 4.0;
  const auto intervals = snaps - 1;
  const auto per = static_cast<std::size_t>(std::ceil(X_final / (dX * static_cast<double>(intervals)) - 1e-9));
  const double h = X_final / static_cast<double>(per * intervals);

  const auto psi0 = dnls::solitary_wave(g, cfg.get_double("amplitude"), cfg.get_double("width"),
                                        cfg.get_double("T0"), 0.0);
  CsvWriter heat(out.path("heatmap.csv"), {"X", "T", "abs2"}, {"1", "1", "1"});
  auto obs = [&](double X, const Field& psi) {
    for (std::size_t j = 0; j < g.size(); ++j) heat.row({X, g[j], std::norm(psi[j])});
  };
  const auto r = dnls::evolve_dnls(psi0, X_final, h, obs, per, cfg.get_int("time_reflect") != 0);
  heat.close();

  CsvWriter diag(out.path("diagnostics.csv"),
                 {"X", "norm", "peak_amplitude", "peak_position", "rms_width", "participation_ratio"},
                 {"1", "1", "1", "1", "1", "1"});
  for (const auto& d : r.diagnostics)
    diag.row({d.X, d.norm, d.peak_amplitude, d.peak_position, d.rms_width, d.participation_ratio});
  diag.close();
  log << "dnls: " << per * intervals << " steps of dX = " << format_double(h) << "\n";
  return kOk;
}

// check ----------------------------------------------------------------------

int cmd_check(const RunConfig& cfg, OutputDir& out, std::ostream& log) {
  AcceptanceOptions opt;
  opt.seed = cfg.seed;
  opt.params = params_of(cfg);
  CsvWriter rep(out.path("check_report.csv"), {"criterion", "status", "value", "tolerance", "detail"},
                {"-", "-", "1", "1", "-"});
  bool all = true;
  run_acceptance(opt, [&](const Criterion& c) {
    all = all && c.pass;
    char secs[32];
    std::snprintf(secs, sizeof secs, "%.2f", c.seconds);
    log << report_line(c) << "  [" << secs << " s]\n";
    log.flush();
    rep.text_row({c.id, c.pass ? "PASS" : "FAIL", format_double(c.value), format_double(c.tolerance), c.detail});
  });
  rep.close();
  log << (all ? "check: all criteria passed\n" : "check: FAILED\n");
  return all ? kOk : kCheckFailed;
}

// duality --------------------------------------------------------------------

int cmd_duality(const RunConfig& cfg, OutputDir& out, std::ostream& log) {
  const auto p = params_of(cfg);
  duality::DualityInput in;
  const auto& name = cfg.get("potential");
  if (name == "free") {
    in.V_sch = [](double) { return 0.0; };
  } else if (name == "harmonic") {
    in.V_sch = [p](double x) { return 0.5 * p.m * p.omega * p.omega * x * x; };
  } else {
    throw UsageError("duality: potential must be 'free' or 'harmonic'");
  }
  in.E_sch = cfg.get_double("E");
  in.E0 = cfg.get_double("E0");
  in.mass = p.m;
  in.hbar = p.hbar;
  in.a = cfg.get_double("a");
  in.b = cfg.get_double("b");
  in.ic_point = cfg.get_double("ic_point");
  in.samples = positive(cfg, "samples");
  const double h = cfg.get_double("h");
  const auto map = duality::build_map(in);
  const auto [lo, hi] = map.valid_interval();
  const double mid = 0.5 * (lo + hi), hw = 0.45 * (hi - lo);
  const auto xs = linspace(mid - hw, mid + hw, cfg.get_int("points"));

  CsvWriter mp(out.path("map.csv"), {"x", "tau", "dtau", "d2tau", "sigma"}, {"length", "time", "time/length", "time/length^2", "1"});
  CsvWriter rs(out.path("residuals.csv"), {"x", "inverse_master", "pure_schwarzian", "inverse_error"},
               {"length", "1/length^2", "1/length^2", "length"});
  CsvWriter vc(out.path("carroll_potential.csv"), {"t", "V_car_re", "V_car_im", "V_fwd_re", "V_fwd_im", "V_sch"},
               {"time", "energy", "energy", "energy", "energy", "energy"});
  double worst_master = 0.0, worst_schw = 0.0, worst_inv = 0.0;
  for (double x : xs) {
    const double one[1] = {x};
    const double rm = duality::verify_inverse_master(map, one, h);
    const double rsw = duality::pure_schwarzian_residual(map, one, h);
    const double t = map.tau(x);
    const double inv = std::abs(map.delta(t) - x);
    worst_master = std::max(worst_master, rm);
    worst_schw = std::max(worst_schw, rsw);
    worst_inv = std::max(worst_inv, inv);
    mp.row({x, t, map.dtau(x), map.d2tau(x), map.sigma(x)});
    rs.row({x, rm, rsw, inv});
    const double ts[1] = {t};
    const auto vcar = duality::carroll_potential(map, ts)[0];
    const auto vf = duality::forward_potential(map, t);
    vc.row({t, vcar.real(), vcar.imag(), vf.real(), vf.imag(), in.V_sch(x)});
  }
  mp.close();
  rs.close();
  vc.close();
  log << "duality(" << name << "): window [" << format_double(lo) << ", " << format_double(hi)
      << "], max residuals master " << format_double(worst_master) << ", schwarzian "
      << format_double(worst_schw) << ", inverse " << format_double(worst_inv) << "\n";
  return kOk;
}

// hbt ------------------------------------------------------------------------

int cmd_hbt(const RunConfig& cfg, OutputDir& out, std::ostream& log);

}  // namespace

std::vector<cplx> hermite_orbital(const TemporalGrid& g, int k) {
  std::vector<cplx> v(g.size());
  for (std::size_t j = 0; j < g.size(); ++j) {
    const double t = g[j];
    double h0 = std::pow(std::numbers::pi, -0.25) * std::exp(-0.5 * t * t), h1 = std::sqrt(2.0) * t * h0;
    double hk = k == 0 ? h0 : h1;
    for (int n = 2; n <= k; ++n) {
      hk = std::sqrt(2.0 / n) * t * h1 - std::sqrt((n - 1.0) / n) * h0;
      h0 = h1;
      h1 = hk;
    }
    v[j] = hk;
  }
  return v;
}

namespace {

int cmd_hbt(const RunConfig& cfg, OutputDir& out, std::ostream& log) {
  const auto g = grid_of(cfg, "t");
  const auto N = cfg.get_int("N");
  if (N < 1 || N > 3) throw UsageError("hbt: N must be 1, 2 or 3");
  const auto& which = cfg.get("statistics");
  std::vector<std::pair<std::string, coherence::Statistics>> stats;
  if (which == "bose" || which == "both") stats.emplace_back("bose", coherence::Statistics::Bose);
  if (which == "fermi" || which == "both") stats.emplace_back("fermi", coherence::Statistics::Fermi);
  if (stats.empty()) throw UsageError("hbt: statistics must be bose, fermi or both");
  const auto bins = positive(cfg, "bins");
  const bool brute = cfg.get_int("brute_force") != 0;

  for (const auto& [label, st] : stats) {
    coherence::OrbitalSet o{g, {}, {}, st};
    for (long k = 0; k < N; ++k) {
      o.orbitals.push_back(hermite_orbital(g, static_cast<int>(k)));
      o.occupations.push_back(1.0);
    }
    const auto d = coherence::coherence_from_orbitals(o, brute);
    CsvWriter gm(out.path("g2_" + label + ".csv"), {"t1", "t2", "n2", "g2", "mask"},
                 {"time", "time", "1/time^2", "1", "1"});
    for (std::size_t a = 0; a < g.size(); ++a)
      for (std::size_t b = 0; b < g.size(); ++b) {
        const auto i = static_cast<Eigen::Index>(a), j = static_cast<Eigen::Index>(b);
        gm.row({g[a], g[b], d.n2(i, j), d.g2(i, j), d.mask(i, j) ? 1.0 : 0.0});
      }
    gm.close();

    const auto hist = coherence::sample_arrivals(d, positive(cfg, "runs"), cfg.seed, bins, positive(cfg, "min_count"));
    const auto exact = coherence::exact_binned_g2(d, bins);
    CsvWriter hs(out.path("histogram_" + label + ".csv"),
                 {"t1_lo", "t1_hi", "t2_lo", "t2_hi", "pairs", "g2_mc", "g2_sigma", "g2_exact", "valid"},
                 {"time", "time", "time", "time", "1", "1", "1", "1", "1"});
    for (std::size_t a = 0; a < bins; ++a)
      for (std::size_t b = 0; b < bins; ++b) {
        const auto i = static_cast<Eigen::Index>(a), j = static_cast<Eigen::Index>(b);
        hs.row({hist.edges[a], hist.edges[a + 1], hist.edges[b], hist.edges[b + 1], hist.pairs(i, j),
                hist.g2(i, j), hist.g2_sigma(i, j), exact(i, j), hist.valid(i, j) ? 1.0 : 0.0});
      }
    hs.close();
    if (!hist.warning.empty()) log << "hbt(" << label << "): " << hist.warning << "\n";
  }
  log << "hbt: wrote " << out.files().size() << " tables\n";
  return kOk;
}

// spectrum -------------------------------------------------------------------

int cmd_spectrum(const RunConfig& cfg, OutputDir& out, std::ostream& log) {
  const auto p = params_of(cfg);
  const auto N = static_cast<int>(positive(cfg, "N"));
  const auto s = propagator::oscillator_spectrum(p, N);
  std::vector<std::string> cols{"mode", "frequency", "ground_wavenumber"}, units{"1", "1/time", "1/length"};
  for (int i = 0; i < N; ++i) {
    cols.push_back("v" + std::to_string(i + 1));
    units.emplace_back("1");
  }
  CsvWriter om(out.path("oscillator_modes.csv"), cols, units);
  for (int a = 0; a < N; ++a) {
    std::vector<double> row{static_cast<double>(a), s.mode_frequencies[static_cast<std::size_t>(a)],
                            s.wavenumber(static_cast<std::size_t>(a), 0)};
    for (int i = 0; i < N; ++i) row.push_back(s.mode_vectors(i, a));
    om.row(row);
  }
  om.close();

  const auto states = static_cast<int>(positive(cfg, "quartic_states"));
  CsvWriter ql(out.path("quartic_levels.csv"), {"lambda", "k", "dense_spectral", "dense_fd", "shooting"},
               {"energy*time", "1", "energy", "energy", "energy"});
  for (double lambda : cfg.get_list("quartic_lambdas")) {
    propagator::QuarticEigenproblem qp{p, lambda, p.k_t, grid_of(cfg, "tau")};
    const auto sp = propagator::quartic_eigensolve(qp, states);
    const auto fd = propagator::quartic_eigensolve(qp, states, propagator::Discretization::FiniteDifference);
    const auto sh = propagator::quartic_shooting(qp, states);
    for (int k = 0; k < states; ++k) {
      const auto i = static_cast<std::size_t>(k);
      ql.row({lambda, static_cast<double>(k), sp.energies[i], fd.energies[i], sh[i]});
    }
  }
  ql.close();
  log << "spectrum: N = " << N << " oscillator modes and " << states << " quartic levels per lambda\n";
  return kOk;
}

// ks -------------------------------------------------------------------------

int cmd_ks(const RunConfig& cfg, OutputDir& out, std::ostream& log) {
  dft::KsSystem sys;
  sys.params = params_of(cfg);
  sys.grid = grid_of(cfg, "t");
  const double kappa = cfg.get_double("kappa"), u0 = cfg.get_double("U_ext");
  const auto phi_ext = dft::KsSystem::sample(sys.grid, [kappa](double t) { return 0.5 * kappa * t * t; });
  sys.Phi_s = phi_ext;
  sys.U_s.assign(sys.grid.size(), u0);
  sys.occupations = cfg.get_list("occupations");
  const double gH = cfg.get_double("g_H");
  auto hartree = dft::hartree_functional(phi_ext, gH);
  auto functional = [&](const dft::DensityPair& d) {
    auto f = hartree(d);
    std::fill(f.U_s.begin(), f.U_s.end(), u0);
    return f;
  };

  auto write_history = [&](const std::vector<double>& h) {
    CsvWriter hw(out.path("ks_history.csv"), {"iteration", "change"}, {"1", "1/time"});
    for (std::size_t i = 0; i < h.size(); ++i) hw.row({static_cast<double>(i + 1), h[i]});
    hw.close();
  };
  dft::ScfResult r;
  try {
    r = dft::scf_loop(sys, functional, cfg.get_double("mix"), cfg.get_double("tol"),
                      static_cast<int>(positive(cfg, "max_iter")));
  } catch (const dft::NotConverged& e) {
    write_history(e.history);
    throw;
  }
  write_history(r.history);
  CsvWriter dw(out.path("ks_densities.csv"), {"t", "n", "j_t", "Phi_s", "U_s"},
               {"time", "1/time", "1/length", "energy", "energy"});
  for (std::size_t j = 0; j < sys.grid.size(); ++j)
    dw.row({sys.grid[j], r.densities.n[j], r.densities.j_t[j], r.system.Phi_s[j], r.system.U_s[j]});
  dw.close();
  CsvWriter lw(out.path("ks_levels.csv"), {"k", "eps", "occupation"}, {"1", "energy", "1"});
  for (std::size_t k = 0; k < r.solution.eps.size(); ++k)
    lw.row({static_cast<double>(k), r.solution.eps[k], sys.occupations[k]});
  lw.close();
  log << "ks: converged in " << r.history.size() << " iterations\n";
  return kOk;
}

}  // namespace

const std::vector<CommandSpec>& commands() {
  static const std::vector<CommandSpec> cmds{
      {"figures-two-body",
       "two-body density/current grids and one-body marginals",
       {{"times", "-1,0,1", "times of the (x1, x2) grids"},
        {"x_min", "-4", ""},
        {"x_max", "4", ""},
        {"x_points", "81", ""},
        {"t_min", "-4", "time axis of the marginals vs t"},
        {"t_max", "4", ""},
        {"t_points", "81", ""},
        {"marginal_times", "-1,0,1", "times of the marginals vs x1"},
        {"marginal_x1", "-1,0,1", "x1 values of the marginals vs t"}},
       cmd_figures_two_body},
      {"dnls",
       "derivative NLS evolution of a solitary pulse",
       {{"amplitude", "1", ""},
        {"width", "1", ""},
        {"T0", "-20", "initial pulse centre"},
        {"T_half_width", "62.831853071795862", "grid is [-T_half_width, T_half_width)"},
        {"T_points", "2048", ""},
        {"X_final", "10", ""},
        {"dX", "0", "0 selects dT^2/4"},
        {"snapshots", "51", "heatmap rows are snapshots x T_points"},
        {"time_reflect", "0", "1 flips the sign of the cubic term"}},
       cmd_dnls},
      {"check", "acceptance suite; exit 1 on any failure", {}, cmd_check},
      {"duality",
       "Schwarzian map for a named potential",
       {{"potential", "harmonic", "free or harmonic"},
        {"E", "0.3", "Schroedinger energy"},
        {"E0", "1", "Carroll energy label"},
        {"a", "-3", ""},
        {"b", "3", ""},
        {"ic_point", "0", ""},
        {"samples", "2001", ""},
        {"points", "201", "samples written across the valid window"},
        {"h", "0.0025", "finite-difference spacing of the residuals"}},
       cmd_duality},
      {"hbt",
       "g2 matrices and sampled arrival histograms",
       {{"statistics", "both", "bose, fermi or both"},
        {"N", "2", "particles in the lowest Hermite orbitals"},
        {"t_min", "-8", ""},
        {"t_max", "8", ""},
        {"t_points", "128", ""},
        {"runs", "1000000", ""},
        {"bins", "16", "must divide t_points"},
        {"min_count", "100", ""},
        {"brute_force", "1", "0 uses the Wick pair density"}},
       cmd_hbt},
      {"spectrum",
       "temporal-oscillator modes and quartic-well levels",
       {{"N", "2", ""},
        {"quartic_states", "5", ""},
        {"quartic_lambdas", "0,1", ""},
        {"tau_min", "-12", ""},
        {"tau_max", "12", ""},
        {"tau_points", "512", ""}},
       cmd_spectrum},
      {"ks",
       "Kohn-Sham SCF with a harmonic external field and a Hartree toy term",
       {{"t_min", "-10", ""},
        {"t_max", "10", ""},
        {"t_points", "256", ""},
        {"kappa", "1", "Phi_ext = kappa t^2 / 2"},
        {"U_ext", "0", "constant gauge field"},
        {"g_H", "0.1", ""},
        {"occupations", "1,1", ""},
        {"mix", "0.3", ""},
        {"tol", "1e-10", ""},
        {"max_iter", "200", ""}},
       cmd_ks},
  };
  return cmds;
}

const CommandSpec& find_command(const std::string& name) {
  for (const auto& c : commands())
    if (c.name == name) return c;
  throw UsageError("unknown command '" + name + "'");
}

int execute(const CommandSpec& cmd, const RunConfig& cfg, std::ostream& log) {
  OutputDir out(cfg.out_dir);
  const int status = cmd.run(cfg, out, log);
  std::ofstream m(out.path("manifest.txt"), std::ios::binary);
  if (!m) throw IoError("cannot write " + out.dir() + "/manifest.txt");
  // Valid as a --config file for the same command.
  m << "# " << kFormatTag << "\n# command=" << cmd.name << "\n";
  for (const auto& [k, v] : cfg.values) m << k << "=" << v << "\n";
  auto files = out.files();
  files.pop_back();
  std::sort(files.begin(), files.end());
  for (const auto& f : files) m << "# output: " << f << "\n";
  m.close();
  if (!m) throw IoError("write failed for " + out.dir() + "/manifest.txt");
  return status;
}

int run_guarded(const std::function<int()>& body, std::ostream& err) {
  try {
    return body();
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const InvalidArgument& e) {
    err << "invalid argument: " << e.what() << "\n";
    return kUsage;
  } catch (const IoError& e) {
    err << "io error: " << e.what() << "\n";
    return kUsage;
  } catch (const NumericError& e) {
    err << "numeric error: " << e.what() << "\n";
    return kNumeric;
  }
}

}  // namespace carroll::cli
