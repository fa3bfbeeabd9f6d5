#include <CLI11.hpp>

#include <cmath>
#include <complex>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "ppwave/config.hpp"
#include "ppwave/equilibria.hpp"
#include "ppwave/errors.hpp"
#include "ppwave/io.hpp"
#include "ppwave/model.hpp"
#include "ppwave/pde.hpp"
#include "ppwave/trajectory.hpp"
#include "ppwave/wave.hpp"

namespace {

constexpr const char* kTool = "ppwave";
constexpr const char* kVersion = "0.1.0";

using ppwave::Config;
using json = nlohmann::json;

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string fmt6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

std::string fmt_complex(const std::complex<double>& z) {
  if (std::abs(z.imag()) < 1e-12) return fmt6(z.real());
  char buf[96];
  std::snprintf(buf, sizeof(buf), "%.6g%+.6gi", z.real(), z.imag());
  return buf;
}

struct CommonOpts {
  std::string config_path;
  std::vector<std::string> overrides;
  std::string out_dir;
};

void add_common(CLI::App* sub, CommonOpts& opts) {
  sub->add_option("--config", opts.config_path, "configuration file");
  sub->add_option("--set", opts.overrides, "override as section.key=value (repeatable)")
      ->take_all();
  sub->add_option("--out", opts.out_dir, "output directory");
}

Config load_config(const CommonOpts& opts) {
  Config cfg = opts.config_path.empty() ? Config::parse_string("", "<empty>")
                                        : Config::parse_file(opts.config_path);
  for (const auto& s : opts.overrides) cfg.set_dotted(s);
  return cfg;
}

// reads model params, echoes resolved values back into cfg, announces the
// d fallback once
ppwave::ModelLoad resolve_model(Config& cfg) {
  ppwave::ModelLoad ml = ppwave::load_model_params(cfg);
  const ppwave::ModelParams& p = ml.params;
  cfg.set("model.r1", fmt(p.r1));
  cfg.set("model.r2", fmt(p.r2));
  cfg.set("model.mu", fmt(p.mu));
  cfg.set("model.a12", fmt(p.a12));
  cfg.set("model.a13", fmt(p.a13));
  cfg.set("model.a21", fmt(p.a21));
  cfg.set("model.a31", fmt(p.a31));
  cfg.set("model.d", fmt(p.d));
  if (ml.d_defaulted)
    std::cerr << "note: diffusion coefficient d not specified; using default d = 1\n";
  return ml;
}

std::filesystem::path resolve_out_dir(Config& cfg, const CommonOpts& opts,
                                      const std::string& command) {
  std::string dir = opts.out_dir;
  if (dir.empty()) dir = cfg.get_string("output", "dir", "ppwave-out/" + command);
  cfg.set("output.dir", dir);
  return dir;
}

json model_json(const ppwave::ModelLoad& ml) {
  json m;
  m["r1"] = ml.params.r1;
  m["r2"] = ml.params.r2;
  m["mu"] = ml.params.mu;
  m["a12"] = ml.params.a12;
  m["a13"] = ml.params.a13;
  m["a21"] = ml.params.a21;
  m["a31"] = ml.params.a31;
  m["d"] = ml.params.d;
  m["d_defaulted"] = ml.d_defaulted;
  if (ml.d_defaulted)
    m["d_note"] = "d was not specified in the configuration; default 1.0 applied";
  return m;
}

void emit_provenance(const std::filesystem::path& out, const Config& cfg, json metadata) {
  metadata["tool"] = kTool;
  metadata["version"] = kVersion;
  ppwave::atomic_write_text(out / "resolved.cfg", cfg.serialize());
  ppwave::atomic_write_text(out / "metadata.json", metadata.dump(2) + "\n");
}

// ---------------------------------------------------------------- analyze

int run_analyze(const CommonOpts& common) {
  Config cfg = load_config(common);
  const ppwave::ModelLoad ml = resolve_model(cfg);
  const std::filesystem::path out = resolve_out_dir(cfg, common, "analyze");
  const ppwave::ModelParams& p = ml.params;

  const ppwave::AssumptionReport rep = ppwave::check_assumptions(p);
  auto eq = ppwave::compute_equilibria(p);
  for (auto& e : eq)
    if (e.exists) e = ppwave::classify_equilibrium(p, e);
  const ppwave::RegimeVerdict rv = ppwave::regime(p);

  std::ostringstream txt;
  txt << "assumptions: H1=" << (rep.h1 ? "true" : "false")
      << " H2=" << (rep.h2 ? "true" : "false") << " H3=" << (rep.h3 ? "true" : "false")
      << " (h3_value = " << fmt6(rep.h3_value) << ")\n";
  txt << "regime: " << ppwave::to_string(rv.regime) << "\n";
  txt << "witness: " << rv.witness << "\n\n";
  txt << "equilibria:\n";
  for (const auto& e : eq) {
    txt << "  " << ppwave::to_string(e.name) << ": ";
    if (!e.exists) {
      txt << "does not exist\n";
      continue;
    }
    txt << "(" << fmt6(e.coords[0]) << ", " << fmt6(e.coords[1]) << ", " << fmt6(e.coords[2])
        << ")  eigenvalues [" << fmt_complex(e.eigenvalues[0]) << ", "
        << fmt_complex(e.eigenvalues[1]) << ", " << fmt_complex(e.eigenvalues[2]) << "]  "
        << ppwave::to_string(e.verdict) << "\n";
  }

  json meta;
  meta["command"] = "analyze";
  meta["model"] = model_json(ml);
  meta["results"]["regime"] = ppwave::to_string(rv.regime);
  meta["results"]["h3_value"] = rep.h3_value;
  emit_provenance(out, cfg, meta);
  ppwave::atomic_write_text(out / "analysis.txt", txt.str());

  std::cout << txt.str();
  std::cout << "report written to " << (out / "analysis.txt").string() << "\n";
  return 0;
}

// -------------------------------------------------------------------- ode

int run_ode(const CommonOpts& common) {
  Config cfg = load_config(common);
  const ppwave::ModelLoad ml = resolve_model(cfg);
  const std::filesystem::path out = resolve_out_dir(cfg, common, "ode");
  const ppwave::ModelParams& p = ml.params;

  const ppwave::OdeState init(cfg.get_double("ode", "u0"), cfg.get_double("ode", "v0"),
                              cfg.get_double("ode", "w0"));
  const double t_end = cfg.get_double("ode", "t_end");
  ppwave::StepControl ctl;
  ctl.rel_tol = cfg.get_double("ode", "rel_tol", 1e-8);
  ctl.abs_tol = cfg.get_double("ode", "abs_tol", 1e-10);
  const double conv_eps = cfg.get_double("ode", "convergence_eps", 1e-4);
  const std::string lyap_mode = cfg.get_string("ode", "lyapunov", "auto");
  cfg.set("ode.u0", fmt(init[0]));
  cfg.set("ode.v0", fmt(init[1]));
  cfg.set("ode.w0", fmt(init[2]));
  cfg.set("ode.t_end", fmt(t_end));
  cfg.set("ode.rel_tol", fmt(ctl.rel_tol));
  cfg.set("ode.abs_tol", fmt(ctl.abs_tol));
  cfg.set("ode.convergence_eps", fmt(conv_eps));
  cfg.set("ode.lyapunov", lyap_mode);
  if (lyap_mode != "auto" && lyap_mode != "v12" && lyap_mode != "vstar" && lyap_mode != "off")
    throw ppwave::config_error("ode.lyapunov must be auto, v12, vstar, or off");

  const ppwave::Trajectory traj = ppwave::integrate(p, init, t_end, ctl);

  auto eq = ppwave::compute_equilibria(p);
  std::vector<ppwave::Equilibrium> targets;
  for (auto& e : eq)
    if (e.exists) targets.push_back(ppwave::classify_equilibrium(p, e));
  const auto hit = ppwave::detect_convergence(traj, targets, conv_eps);
  const ppwave::BoundsReport bounds = ppwave::check_bounds(traj, p);
  const ppwave::RegimeVerdict rv = ppwave::regime(p);

  std::ostringstream txt;
  txt << "t_end = " << fmt6(t_end) << ", samples = " << traj.times.size()
      << ", clamp events = " << traj.events.size() << "\n";
  txt << "regime: " << ppwave::to_string(rv.regime) << "\n";
  if (hit) {
    txt << "converged to " << ppwave::to_string(hit->name) << " at t = " << fmt6(hit->time)
        << " (eps " << fmt6(conv_eps) << ", final distance " << fmt6(hit->final_distance)
        << ")\n";
  } else {
    txt << "no convergence within eps " << fmt6(conv_eps) << " by t_end\n";
  }
  const auto& fin = traj.states.back();
  txt << "final state: (" << fmt6(fin[0]) << ", " << fmt6(fin[1]) << ", " << fmt6(fin[2])
      << ")\n";
  txt << "tail bounds (from t = " << fmt6(bounds.tail_start) << "): sup u = "
      << fmt6(bounds.u_sup_tail) << " (<= 1: " << (bounds.u_ok ? "yes" : "no")
      << "), sup v = " << fmt6(bounds.v_sup_tail) << " (<= 1+a21/r2: "
      << (bounds.v_ok ? "yes" : "no") << "), sup u+(a13/a31)w = " << fmt6(bounds.combined_tail)
      << " (<= (r1+mu)/mu: " << (bounds.combined_ok ? "yes" : "no") << ")\n";

  json meta;
  meta["command"] = "ode";
  meta["model"] = model_json(ml);
  meta["results"]["samples"] = traj.times.size();
  meta["results"]["converged"] = static_cast<bool>(hit);
  if (hit) {
    meta["results"]["target"] = ppwave::to_string(hit->name);
    meta["results"]["convergence_time"] = hit->time;
  }

  std::string lyap_used;
  if (lyap_mode == "v12" || (lyap_mode == "auto" && rv.regime == ppwave::Regime::E12_GAS))
    lyap_used = "v12";
  else if (lyap_mode == "vstar" || (lyap_mode == "auto" && rv.regime == ppwave::Regime::Estar_GAS))
    lyap_used = "vstar";
  if (!lyap_used.empty()) {
    const ppwave::LyapunovKind kind =
        lyap_used == "v12" ? ppwave::LyapunovKind::V12 : ppwave::LyapunovKind::Vstar;
    const ppwave::MonotonicityReport mono = ppwave::monitor_lyapunov(traj, kind, p);
    txt << "Lyapunov " << (lyap_used == "v12" ? "V12" : "V*") << ": "
        << (mono.pass ? "nonincreasing" : "INCREASE DETECTED") << ", value " << fmt6(mono.initial_value)
        << " -> " << fmt6(mono.final_value) << ", max normalized increment "
        << fmt6(mono.max_normalized_increment) << "\n";
    meta["results"]["lyapunov"] = lyap_used;
    meta["results"]["lyapunov_nonincreasing"] = mono.pass;
  } else {
    txt << "Lyapunov monitoring: not applicable in this regime\n";
  }

  emit_provenance(out, cfg, meta);
  ppwave::atomic_write_text(out / "trajectory.csv", ppwave::trajectory_csv(traj));
  ppwave::atomic_write_text(out / "summary.txt", txt.str());
  std::cout << txt.str();
  std::cout << "trajectory written to " << (out / "trajectory.csv").string() << "\n";
  return 0;
}

// ------------------------------------------------------------------- wave

int run_wave(const CommonOpts& common) {
  Config cfg = load_config(common);
  const ppwave::ModelLoad ml = resolve_model(cfg);
  const std::filesystem::path out = resolve_out_dir(cfg, common, "wave");
  const ppwave::ModelParams& p = ml.params;

  const double c = cfg.get_double("wave", "c");
  const double eps = cfg.get_double("wave", "eps", 0.01);
  const double z_tol = cfg.get_double("wave", "z_tol", 1e-12);
  const double horizon = cfg.get_double("wave", "horizon", 500.0);
  cfg.set("wave.c", fmt(c));
  cfg.set("wave.eps", fmt(eps));
  cfg.set("wave.z_tol", fmt(z_tol));
  cfg.set("wave.horizon", fmt(horizon));

  if (!(eps > 0 && eps <= 0.05))
    throw ppwave::config_error("wave.eps = " + fmt6(eps) +
                               " is outside (0, 0.05]; choose a smaller eps");

  const ppwave::WaveConfig wc = ppwave::wave_config(p, c);
  const ppwave::WaveResult wr = ppwave::find_wave(p, wc, eps, z_tol, horizon);

  std::ostringstream txt;
  txt << "wave speed c = " << fmt6(c) << " (c_star = " << fmt6(wc.c_star) << ", sigma1 = "
      << fmt6(wc.sigma1) << ", sigma2 = " << fmt6(wc.sigma2) << ")\n";
  txt << "z_star = " << fmt(wr.z_star) << " (bracket width " << fmt6(wr.bracket_width)
      << ", eps = " << fmt6(eps) << ")\n";
  txt << "refinement stages = " << wr.stages << ", samples = " << wr.trajectory.times.size()
      << "\n";
  txt << "tail distance to E* lift = " << fmt6(wr.tail_distance) << "\n";
  txt << "L along profile: " << fmt6(wr.lyapunov.initial_value) << " -> "
      << fmt6(wr.lyapunov.final_value) << ", nonincreasing: "
      << (wr.lyapunov.pass ? "yes" : "no") << "\n";
  txt << "certified: " << (wr.certified ? "true" : "false") << "\n";

  json meta;
  meta["command"] = "wave";
  meta["model"] = model_json(ml);
  meta["results"]["c"] = c;
  meta["results"]["c_star"] = wc.c_star;
  meta["results"]["z_star"] = wr.z_star;
  meta["results"]["stages"] = wr.stages;
  meta["results"]["tail_distance"] = wr.tail_distance;
  meta["results"]["certified"] = wr.certified;

  emit_provenance(out, cfg, meta);
  ppwave::atomic_write_text(out / "profile.csv", ppwave::profile_csv(wr.trajectory));
  ppwave::atomic_write_text(out / "profile.svg",
                            ppwave::profile_svg(wr.trajectory, "wave profile, c = " + fmt6(c)));
  ppwave::atomic_write_text(out / "certification.txt", txt.str());
  std::cout << txt.str();
  std::cout << "profile written to " << (out / "profile.csv").string() << "\n";
  return 0;
}

// -------------------------------------------------------------------- pde

std::vector<std::array<double, 3>> parse_pieces(const std::string& text) {
  std::vector<std::array<double, 3>> pieces;
  std::istringstream in(text);
  std::string item;
  while (std::getline(in, item, ';')) {
    if (item.find_first_not_of(" \t") == std::string::npos) continue;
    double lo, hi, val;
    char c1, c2;
    std::istringstream pi(item);
    if (!(pi >> lo >> c1 >> hi >> c2 >> val) || c1 != ':' || c2 != ':')
      throw ppwave::config_error("bad piecewise segment '" + item + "'; expected lo:hi:value");
    pieces.push_back({lo, hi, val});
  }
  return pieces;
}

int run_pde(const CommonOpts& common) {
  Config cfg = load_config(common);
  const ppwave::ModelLoad ml = resolve_model(cfg);
  const std::filesystem::path out = resolve_out_dir(cfg, common, "pde");
  const ppwave::ModelParams& p = ml.params;

  ppwave::Grid1D grid;
  grid.length = cfg.get_double("pde", "length", 10.0);
  grid.n_cells = static_cast<int>(cfg.get_int("pde", "n_cells", 200));
  ppwave::validate_grid(grid);

  const bool has_scenario = cfg.has("pde", "scenario");
  const bool has_custom = cfg.has("pde", "u_base") || cfg.has("pde", "v_base") ||
                          cfg.has("pde", "w_base") || cfg.has("pde", "u_init") ||
                          cfg.has("pde", "v_init") || cfg.has("pde", "w_init");
  if (has_scenario && has_custom)
    throw ppwave::config_error("pde.scenario and custom initial profiles are mutually exclusive");
  if (!has_scenario && !has_custom)
    throw ppwave::config_error("pde requires either pde.scenario or custom initial profiles");

  ppwave::Field1D f0;
  if (has_scenario) {
    f0 = ppwave::make_scenario(static_cast<int>(cfg.get_int("pde", "scenario")), grid);
  } else {
    f0 = ppwave::make_uniform(grid, {cfg.get_double("pde", "u_base", 0.0),
                                     cfg.get_double("pde", "v_base", 0.0),
                                     cfg.get_double("pde", "w_base", 0.0)});
    Eigen::VectorXd* arrays[3] = {&f0.u, &f0.v, &f0.w};
    const char* keys[3] = {"u_init", "v_init", "w_init"};
    for (int s = 0; s < 3; ++s) {
      if (!cfg.has("pde", keys[s])) continue;
      for (const auto& piece : parse_pieces(cfg.get_string("pde", keys[s])))
        for (int i = 0; i < grid.n_cells; ++i) {
          const double x = grid.cell_center(i);
          if (x >= piece[0] && x <= piece[1]) (*arrays[s])[i] = piece[2];
        }
    }
  }

  ppwave::RunOptions ro;
  ro.t_end = cfg.get_double("pde", "t_end", 300.0);
  ro.output_every = cfg.get_double("pde", "output_every", 1.0);
  ro.dt = cfg.get_double("pde", "dt", 0.0);
  const std::string scheme = cfg.get_string("pde", "scheme", "explicit");
  if (scheme == "explicit")
    ro.scheme = ppwave::StepScheme::ExplicitRk4;
  else if (scheme == "implicit")
    ro.scheme = ppwave::StepScheme::ImplicitDiffusion;
  else
    throw ppwave::config_error("pde.scheme must be explicit or implicit");
  const bool want_front = cfg.get_bool("pde", "front_speed", false);
  const double theta = cfg.get_double("pde", "theta", 0.05);
  const std::string direction = cfg.get_string("pde", "direction", "right");
  if (direction != "right" && direction != "left")
    throw ppwave::config_error("pde.direction must be right or left");

  cfg.set("pde.length", fmt(grid.length));
  cfg.set("pde.n_cells", std::to_string(grid.n_cells));
  cfg.set("pde.t_end", fmt(ro.t_end));
  cfg.set("pde.output_every", fmt(ro.output_every));
  cfg.set("pde.scheme", scheme);
  cfg.set("pde.front_speed", want_front ? "true" : "false");
  cfg.set("pde.theta", fmt(theta));
  cfg.set("pde.direction", direction);

  const ppwave::SpaceTimeRecord rec = ppwave::run(p, grid, f0, ro);

  std::ostringstream txt;
  txt << "grid: L = " << fmt6(grid.length) << ", n_cells = " << grid.n_cells << ", dx = "
      << fmt6(grid.dx()) << "\n";
  txt << "t_end = " << fmt6(ro.t_end) << ", snapshots = " << rec.times.size() << ", scheme = "
      << scheme << "\n";
  txt << "clamp events = " << rec.stats.clamp_events << " over " << rec.stats.cell_steps
      << " cell-steps\n";
  const ppwave::Field1D& term = rec.terminal();
  txt << "terminal ranges: u [" << fmt6(term.u.minCoeff()) << ", " << fmt6(term.u.maxCoeff())
      << "], v [" << fmt6(term.v.minCoeff()) << ", " << fmt6(term.v.maxCoeff()) << "], w ["
      << fmt6(term.w.minCoeff()) << ", " << fmt6(term.w.maxCoeff()) << "]\n";

  json meta;
  meta["command"] = "pde";
  meta["model"] = model_json(ml);
  meta["results"]["snapshots"] = rec.times.size();
  meta["results"]["clamp_events"] = rec.stats.clamp_events;
  meta["results"]["cell_steps"] = rec.stats.cell_steps;

  if (want_front) {
    const ppwave::FrontTrace tr = ppwave::front_speed(rec, theta, direction == "right");
    txt << "front speed (theta = " << fmt6(theta) << "): " << fmt6(tr.speed) << " (R^2 = "
        << fmt6(tr.r_squared) << ")";
    meta["results"]["front_speed"] = tr.speed;
    meta["results"]["front_r_squared"] = tr.r_squared;
    if (p.a31 > p.mu) {
      const double c_star = 2.0 * std::sqrt(p.d * (p.a31 - p.mu));
      txt << ", c_star = " << fmt6(c_star) << ", relative gap = "
          << fmt6(std::abs(std::abs(tr.speed) - c_star) / c_star);
      meta["results"]["c_star"] = c_star;
    }
    txt << "\n";
    ppwave::atomic_write_text(out / "front.csv", ppwave::front_csv(tr));
  }

  emit_provenance(out, cfg, meta);
  for (const char s : {'u', 'v', 'w'}) {
    const std::string name(1, s);
    ppwave::atomic_write_text(out / (name + ".csv"), ppwave::species_csv(rec, s));
    ppwave::atomic_write_text(out / (name + "_heatmap.svg"),
                              ppwave::heatmap_svg(rec, s, name + "(x, t)"));
  }
  ppwave::atomic_write_text(out / "initial.svg",
                            ppwave::snapshot_svg(grid, f0, "initial profiles"));
  ppwave::atomic_write_text(out / "summary.txt", txt.str());
  std::cout << txt.str();
  std::cout << "space-time output written to " << out.string() << "\n";
  return 0;
}

int guarded(const std::function<int()>& body) {
  try {
    return body();
  } catch (const ppwave::subcritical_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const ppwave::config_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const ppwave::insufficient_data_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const ppwave::numerical_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"three-species predator-prey reaction-diffusion toolkit"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  CommonOpts analyze_opts, ode_opts, wave_opts, pde_opts;
  auto* analyze = app.add_subcommand("analyze", "equilibria, stability, and regime report");
  add_common(analyze, analyze_opts);
  auto* ode = app.add_subcommand("ode", "integrate the reaction system from an initial state");
  add_common(ode, ode_opts);
  double ode_u0 = 0, ode_v0 = 0, ode_w0 = 0, ode_t_end = 0;
  auto* o_u0 = ode->add_option("--u0", ode_u0, "initial u");
  auto* o_v0 = ode->add_option("--v0", ode_v0, "initial v");
  auto* o_w0 = ode->add_option("--w0", ode_w0, "initial w");
  auto* o_te = ode->add_option("--t-end", ode_t_end, "integration end time");
  auto* wave = app.add_subcommand("wave", "shoot for the E1 -> E* traveling wave profile");
  add_common(wave, wave_opts);
  double wave_c = 0, wave_eps = 0, wave_ztol = 0, wave_horizon = 0;
  auto* w_c = wave->add_option("--c", wave_c, "wave speed");
  auto* w_eps = wave->add_option("--eps", wave_eps, "unstable-manifold offset");
  auto* w_zt = wave->add_option("--z-tol", wave_ztol, "bisection bracket tolerance");
  auto* w_hz = wave->add_option("--horizon", wave_horizon, "shot time horizon");
  auto* pde = app.add_subcommand("pde", "simulate the reaction-diffusion system");
  add_common(pde, pde_opts);
  long pde_scenario = 0, pde_cells = 0;
  double pde_t_end = 0, pde_length = 0;
  auto* p_sc = pde->add_option("--scenario", pde_scenario, "initial-condition scenario (1|2|3)");
  auto* p_nc = pde->add_option("--n-cells", pde_cells, "grid cells");
  auto* p_te = pde->add_option("--t-end", pde_t_end, "simulation end time");
  auto* p_ln = pde->add_option("--length", pde_length, "domain length");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  return guarded([&]() -> int {
    if (analyze->parsed()) return run_analyze(analyze_opts);
    if (ode->parsed()) {
      if (o_u0->count()) ode_opts.overrides.push_back("ode.u0=" + fmt(ode_u0));
      if (o_v0->count()) ode_opts.overrides.push_back("ode.v0=" + fmt(ode_v0));
      if (o_w0->count()) ode_opts.overrides.push_back("ode.w0=" + fmt(ode_w0));
      if (o_te->count()) ode_opts.overrides.push_back("ode.t_end=" + fmt(ode_t_end));
      return run_ode(ode_opts);
    }
    if (wave->parsed()) {
      if (w_c->count()) wave_opts.overrides.push_back("wave.c=" + fmt(wave_c));
      if (w_eps->count()) wave_opts.overrides.push_back("wave.eps=" + fmt(wave_eps));
      if (w_zt->count()) wave_opts.overrides.push_back("wave.z_tol=" + fmt(wave_ztol));
      if (w_hz->count()) wave_opts.overrides.push_back("wave.horizon=" + fmt(wave_horizon));
      return run_wave(wave_opts);
    }
    if (pde->parsed()) {
      if (p_sc->count()) pde_opts.overrides.push_back("pde.scenario=" + std::to_string(pde_scenario));
      if (p_nc->count()) pde_opts.overrides.push_back("pde.n_cells=" + std::to_string(pde_cells));
      if (p_te->count()) pde_opts.overrides.push_back("pde.t_end=" + fmt(pde_t_end));
      if (p_ln->count()) pde_opts.overrides.push_back("pde.length=" + fmt(pde_length));
      return run_pde(pde_opts);
    }
    return 1;
  });
}
