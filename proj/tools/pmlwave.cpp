// pmlwave: drive wave-equation runs with the absorbing layer, error and
// reflection studies against enlarged-domain references, convergence and
// symbol-stability checks, and the damping-profile export.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "pmlwave/config.hpp"
#include "pmlwave/config_io.hpp"
#include "pmlwave/damping.hpp"
#include "pmlwave/errors.hpp"
#include "pmlwave/harness.hpp"
#include "pmlwave/snapshot_io.hpp"
#include "pmlwave/solver2d.hpp"
#include "pmlwave/solver3d.hpp"
#include "pmlwave/stability.hpp"

namespace fs = std::filesystem;
using namespace pmlwave;

namespace {

struct ConfigSource {
  std::string path;
  std::string preset;

  SimulationConfig load() const {
    if (!path.empty() && !preset.empty())
      throw ConfigError("give a config file or --preset, not both");
    if (!path.empty()) return parse_config(path);
    if (!preset.empty()) return preset_config(preset);
    throw ConfigError("no configuration given; pass a config file or --preset");
  }
};

void add_config_options(CLI::App* cmd, ConfigSource& src) {
  cmd->add_option("config", src.path, "JSON config file");
  cmd->add_option("--preset", src.preset,
                  "built-in preset (point2d, hetero2d, point3d)");
}

void override_dx(SimulationConfig& cfg, double dx) {
  std::vector<double> a, L, dxv;
  for (int m = 0; m < cfg.grid.dim; ++m) {
    a.push_back(cfg.grid.a[m]);
    L.push_back(cfg.grid.L[m]);
    dxv.push_back(dx);
  }
  cfg.grid = build_grid(cfg.grid.dim, a, L, dxv);
}

std::string step_tag(long step) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%06ld", step);
  return buf;
}

void write_frame(const std::string& dir, const GridSpec& grid, long step,
                 double t, const ScalarField& u, const std::string& stem) {
  SnapshotFile snap{grid, t, step, "u", u};
  const std::string base = dir + "/" + stem;
  write_snapshot(base + ".f64", snap);
  export_image(base + ".pgm", grid, u);
}

std::vector<double> default_times(const SimulationConfig& cfg) {
  if (!cfg.snapshot_times.empty()) return cfg.snapshot_times;
  std::vector<double> times;
  const int n = 10;
  for (int i = 0; i <= n; ++i) times.push_back(cfg.t_end * i / n);
  return times;
}

void write_series_csv(const std::string& path, const ErrorSeries& s) {
  std::vector<std::vector<double>> rows;
  for (std::size_t i = 0; i < s.times.size(); ++i)
    rows.push_back({s.times[i], s.e_l2[i], s.e_rel[i]});
  write_csv(path, {"t", "e_L2", "e_rel"}, rows);
}

int cmd_run(const ConfigSource& src, std::optional<double> dx,
            std::optional<double> t_end, const std::string& out) {
  SimulationConfig cfg = src.load();
  if (dx) override_dx(cfg, *dx);
  if (t_end) cfg.t_end = *t_end;
  if (!out.empty()) cfg.output_dir = out;
  validate_config(cfg);

  fs::create_directories(cfg.output_dir);
  const std::string dir = cfg.output_dir;

  // no schedule in the config: still write the final state
  std::vector<double> extra;
  if (cfg.snapshot_times.empty()) extra.push_back(cfg.t_end);

  RunSummary sum;
  if (cfg.grid.dim == 2) {
    sum = run2d(
        cfg,
        [&](long step, double t, const Stepper2D& st) {
          write_frame(dir, st.grid(), step, t, st.state().u_curr,
                      "u_" + step_tag(step));
        },
        extra);
  } else {
    sum = run3d(
        cfg,
        [&](long step, double t, const Stepper3D& st) {
          write_frame(dir, st.grid(), step, t, st.state().u_curr,
                      "u_" + step_tag(step));
        },
        extra);
  }

  std::printf("steps            %ld\n", sum.steps);
  std::printf("dt               %.17g\n", sum.dt);
  std::printf("max |u|          %.17g\n", sum.run_max);
  std::printf("max |u| interior %.17g\n", sum.run_max_interior);
  std::printf("final L2         %.17g\n", sum.final_l2);
  std::printf("wall seconds     %.3f\n", sum.wall_seconds);
  std::printf("output           %s\n", dir.c_str());
  return 0;
}

int cmd_errors(const ConfigSource& src, std::optional<double> dx,
               std::optional<double> t_end, double factor,
               std::vector<double> times, const std::string& out) {
  SimulationConfig cfg = src.load();
  if (dx) override_dx(cfg, *dx);
  if (t_end) cfg.t_end = *t_end;
  validate_config(cfg);
  if (times.empty()) times = default_times(cfg);
  const ReferenceRun ref = reference_run(cfg, factor, times);
  const ErrorSeries series = l2_error_series(cfg, ref);
  write_series_csv(out, series);

  double worst = 0.0;
  for (double e : series.e_rel) worst = std::max(worst, e);
  std::printf("reference dt   %.17g\n", ref.dt);
  std::printf("normalization  %.17g\n", series.normalization);
  std::printf("max e_rel      %.17g\n", worst);
  std::printf("series         %s\n", out.c_str());
  return 0;
}

int cmd_sweep(const ConfigSource& src, std::optional<double> dx,
              std::optional<double> t_end, std::vector<double> zeta_bars,
              double factor, std::vector<double> times,
              const std::string& out_dir) {
  SimulationConfig cfg = src.load();
  if (dx) override_dx(cfg, *dx);
  if (t_end) cfg.t_end = *t_end;
  validate_config(cfg);
  if (times.empty()) times = default_times(cfg);
  fs::create_directories(out_dir);
  const auto entries = reflection_sweep(cfg, zeta_bars, factor, times);
  for (const auto& entry : entries) {
    char name[64];
    std::snprintf(name, sizeof(name), "sweep_zb%g.csv", entry.zeta_bar);
    write_series_csv(out_dir + "/" + name, entry.series);
    std::printf("zeta_bar %-8g final e_L2 %.17g  final e_rel %.17g\n",
                entry.zeta_bar, entry.series.e_l2.back(),
                entry.series.e_rel.back());
  }
  return 0;
}

int cmd_convergence(int dim, const std::vector<double>& dxs, double t_end,
                    double c, double safety, const std::string& out) {
  const ConvergenceReport rep = convergence_study(dim, dxs, t_end, c, safety);
  std::printf("%-12s %-24s %s\n", "dx", "e_L2", "order");
  for (std::size_t i = 0; i < rep.dxs.size(); ++i) {
    if (i == 0)
      std::printf("%-12g %-24.17g %s\n", rep.dxs[i], rep.errors[i], "-");
    else
      std::printf("%-12g %-24.17g %.3f\n", rep.dxs[i], rep.errors[i],
                  rep.orders[i - 1]);
  }
  if (rep.exact) std::printf("(errors at rounding level)\n");
  if (!out.empty()) {
    std::vector<std::vector<double>> rows;
    for (std::size_t i = 0; i < rep.dxs.size(); ++i)
      rows.push_back({rep.dxs[i], rep.errors[i],
                      i == 0 ? 0.0 : rep.orders[i - 1]});
    write_csv(out, {"dx", "e_L2", "order"}, rows);
  }
  return 0;
}

int cmd_stability(int dim, int samples, double c, double zeta_max,
                  double k_max, std::uint64_t seed, bool include_lower,
                  const std::string& out) {
  const ScanResult res =
      stability_scan(dim, samples, c, zeta_max, k_max, seed, include_lower);
  if (!out.empty()) {
    std::vector<std::vector<double>> rows;
    for (const auto& s : res.samples)
      rows.push_back({s.k[0], s.k[1], s.k[2], s.zeta[0], s.zeta[1], s.zeta[2],
                      s.max_re, s.max_re_clustered, s.complete ? 1.0 : 0.0});
    write_csv(out,
              {"k1", "k2", "k3", "zeta1", "zeta2", "zeta3", "max_re",
               "max_re_clustered", "complete"},
              rows);
  }
  std::printf("samples                  %d\n",
              static_cast<int>(res.samples.size()));
  std::printf("worst |Re|/(c|k|)        %.17g\n", res.worst_re_clustered);
  std::printf("completeness pattern ok  %s\n",
              res.completeness_pattern_ok ? "yes" : "no");
  if (!out.empty()) std::printf("samples csv              %s\n", out.c_str());
  return res.completeness_pattern_ok ? 0 : 1;
}

int cmd_profile(double zeta_bar, double a, double L, double dx,
                const std::string& out) {
  const GridSpec grid = build_grid(2, {a, a}, {L, L}, {dx, dx});
  std::vector<std::vector<double>> rows;
  for (int l = 0; l <= 2 * grid.n_layer[0]; ++l) {
    const double x = a + 0.5 * l * dx;
    rows.push_back({x, eval_zeta(x, a, L, zeta_bar)});
  }
  write_csv(out, {"x", "zeta"}, rows);
  std::printf("profile csv %s\n", out.c_str());
  return 0;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Wave-equation solver with an unsplit absorbing layer"};
  app.require_subcommand(1);

  ConfigSource run_src;
  std::optional<double> run_dx, run_t_end;
  std::string run_out;
  auto* run = app.add_subcommand("run", "time-step a configuration");
  add_config_options(run, run_src);
  run->add_option("--dx", run_dx, "override the node spacing on every axis");
  run->add_option("--t-end", run_t_end, "override the final time");
  run->add_option("--out", run_out, "output directory");

  ConfigSource err_src;
  std::optional<double> err_dx, err_t_end;
  double err_factor = 4.0;
  std::vector<double> err_times;
  std::string err_out = "errors.csv";
  auto* errors = app.add_subcommand(
      "errors", "L2 error series against an enlarged-domain reference");
  add_config_options(errors, err_src);
  errors->add_option("--dx", err_dx, "override the node spacing");
  errors->add_option("--t-end", err_t_end, "override the final time");
  errors->add_option("--factor", err_factor,
                     "reference half-width as a multiple of max(a)");
  errors->add_option("--times", err_times, "snapshot times")
      ->delimiter(',');
  errors->add_option("--out", err_out, "output CSV path");

  ConfigSource sweep_src;
  std::optional<double> sweep_dx, sweep_t_end;
  std::vector<double> sweep_zb{20.0, 40.0, 60.0, 80.0};
  double sweep_factor = 4.0;
  std::vector<double> sweep_times;
  std::string sweep_out = ".";
  auto* sweep = app.add_subcommand(
      "sweep", "error series per layer strength, one shared reference");
  add_config_options(sweep, sweep_src);
  sweep->add_option("--dx", sweep_dx, "override the node spacing");
  sweep->add_option("--t-end", sweep_t_end, "override the final time");
  sweep->add_option("--zeta-bar", sweep_zb, "layer strengths")
      ->delimiter(',');
  sweep->add_option("--factor", sweep_factor,
                    "reference half-width as a multiple of max(a)");
  sweep->add_option("--times", sweep_times, "snapshot times")
      ->delimiter(',');
  sweep->add_option("--out", sweep_out, "output directory");

  int conv_dim = 2;
  std::vector<double> conv_dxs{0.1, 0.05, 0.025};
  double conv_t_end = 0.25, conv_c = 1.0, conv_safety = 0.9;
  std::string conv_out;
  auto* conv = app.add_subcommand(
      "convergence", "observed order on the standing Dirichlet mode");
  conv->add_option("--dim", conv_dim, "2 or 3")
      ->check(CLI::IsMember({2, 3}));
  conv->add_option("--dx", conv_dxs, "node spacings, coarse to fine")
      ->delimiter(',');
  conv->add_option("--t-end", conv_t_end, "comparison time");
  conv->add_option("--c", conv_c, "wave speed");
  conv->add_option("--safety", conv_safety, "CFL safety factor");
  conv->add_option("--out", conv_out, "optional output CSV path");

  int stab_dim = 2, stab_samples = 1000;
  double stab_c = 1.0, stab_zeta_max = 100.0, stab_k_max = 50.0;
  std::uint64_t stab_seed = 1;
  bool stab_lower = false;
  std::string stab_out;
  auto* stab = app.add_subcommand(
      "stability", "randomized eigenvalue scan of the first-order symbol");
  stab->add_option("--dim", stab_dim, "2 or 3")
      ->check(CLI::IsMember({2, 3}));
  stab->add_option("--samples", stab_samples, "number of (zeta, k) samples");
  stab->add_option("--c", stab_c, "wave speed");
  stab->add_option("--zeta-max", stab_zeta_max, "damping range [0, zeta_max]");
  stab->add_option("--k-max", stab_k_max, "wavenumber range [-k_max, k_max]");
  stab->add_option("--seed", stab_seed, "RNG seed");
  stab->add_flag("--include-lower", stab_lower,
                 "add the lower-order term to the symbol");
  stab->add_option("--out", stab_out, "optional per-sample CSV path");

  double prof_zb = 80.0, prof_a = 0.5, prof_L = 0.1, prof_dx = 0.002;
  std::string prof_out = "profile.csv";
  auto* prof = app.add_subcommand("profile", "export the damping ramp");
  prof->add_option("--zeta-bar", prof_zb, "layer strength");
  prof->add_option("--a", prof_a, "interior half-width");
  prof->add_option("--L", prof_L, "layer width");
  prof->add_option("--dx", prof_dx, "node spacing");
  prof->add_option("--out", prof_out, "output CSV path");

  try {
    app.parse(argc, argv);
    if (run->parsed()) return cmd_run(run_src, run_dx, run_t_end, run_out);
    if (errors->parsed())
      return cmd_errors(err_src, err_dx, err_t_end, err_factor, err_times,
                        err_out);
    if (sweep->parsed())
      return cmd_sweep(sweep_src, sweep_dx, sweep_t_end, sweep_zb,
                       sweep_factor, sweep_times, sweep_out);
    if (conv->parsed())
      return cmd_convergence(conv_dim, conv_dxs, conv_t_end, conv_c,
                             conv_safety, conv_out);
    if (stab->parsed())
      return cmd_stability(stab_dim, stab_samples, stab_c, stab_zeta_max,
                           stab_k_max, stab_seed, stab_lower, stab_out);
    if (prof->parsed())
      return cmd_profile(prof_zb, prof_a, prof_L, prof_dx, prof_out);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const InstabilityError& e) {
    std::cerr << "instability: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
