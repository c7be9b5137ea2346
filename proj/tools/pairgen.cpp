// SPDX-License-Identifier: Apache-2.0
//
// pairgen: design and analysis for a two-crystal polarization-entangled
// photon-pair source. One subcommand per pipeline stage:
//
//   design      phase-matching angle, walk-off and mode-overlap report
//   compensate  relative-phase curves and the compensator-length optimum
//   hwp-design  achromatic half-wave-plate thicknesses
//   curves      single- and two-polarizer theory curves
//   simulate    synthetic polarizer-sweep count data
//   fit         state fit with bootstrap uncertainties for a sweep file
//   replicate   full pipeline against the published targets, pass/fail table

#include <cstdio>
#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "pairgen/config.hpp"
#include "pairgen/phasematch.hpp"
#include "pairgen/report.hpp"
#include "pairgen/version.hpp"

namespace {

// exit codes: 0 success, 1 runtime failure, 2 configuration error,
// 3 not phase-matchable
constexpr int kExitRuntime = 1;
constexpr int kExitConfig = 2;
constexpr int kExitNotPhaseMatchable = 3;

struct Options {
  std::string config_path;
  std::string out_dir = "out";
  std::string input;  // fit only
  std::uint64_t seed = 0;
  bool seed_set = false;
};

pairgen::RunConfig load(const Options& opt) {
  pairgen::RunConfig cfg = pairgen::load_config(opt.config_path);
  if (opt.seed_set) cfg.seed = opt.seed;
  return cfg;
}

void print_replication(const pairgen::ReplicationReport& report) {
  std::printf("%-4s %-38s %-6s %s\n", "no.", "criterion", "result", "measured vs target");
  for (const auto& c : report.criteria) {
    std::printf("%-4d %-38s %-6s %s | %s | %.3f s\n", c.index, c.name.c_str(),
                c.pass ? "PASS" : "FAIL", c.measured.c_str(), c.target.c_str(), c.runtime_s);
  }
  std::printf("overall: %s\n", report.all_pass ? "PASS" : "FAIL");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"two-crystal entangled photon-pair source toolkit"};
  app.set_version_flag("--version", std::string(pairgen::kVersion));
  app.require_subcommand(1);
  app.fallthrough();  // global flags may follow the subcommand

  Options opt;
  app.add_option("--config", opt.config_path, "run configuration file")->required();
  app.add_option("--out", opt.out_dir, "output directory (default: out)");
  auto* seed_opt = app.add_option("--seed", opt.seed, "override the configured seed");

  auto* design = app.add_subcommand("design", "phase-matching and walk-off report");
  auto* compensate = app.add_subcommand("compensate", "relative-phase compensation");
  auto* hwp = app.add_subcommand("hwp-design", "achromatic half-wave-plate design");
  auto* curves = app.add_subcommand("curves", "polarization-correlation theory curves");
  auto* simulate = app.add_subcommand("simulate", "generate a synthetic polarizer sweep");
  auto* fit = app.add_subcommand("fit", "fit a measured or simulated sweep");
  fit->add_option("--input", opt.input, "sweep file (default: <out>/sweep.dat)");
  auto* replicate = app.add_subcommand("replicate", "run the replication pass/fail table");

  CLI11_PARSE(app, argc, argv);
  opt.seed_set = seed_opt->count() > 0;

  try {
    const pairgen::RunConfig cfg = load(opt);
    if (design->parsed()) {
      const auto s = pairgen::cmd_design(cfg, opt.out_dir);
      std::printf("cut angle (solved) : %.4f deg\n", s.cut_solved_deg);
      std::printf("emission           : %.2f / %.2f nm\n", s.emission_signal_nm,
                  s.emission_idler_nm);
      std::printf("walk-off pump/pair : %.4f / %.4f deg\n", s.walkoff_pump_deg,
                  s.walkoff_pair_deg);
      std::printf("emission mismatch  : %.3f%%\n", 100.0 * s.mismatch);
      std::printf("pair-mode overlap  : %.4f\n", s.overlap_pair_modes);
      std::printf("report: %s/design.json\n", opt.out_dir.c_str());
    } else if (compensate->parsed()) {
      const auto s = pairgen::cmd_compensate(cfg, opt.out_dir);
      std::printf("compensator optimum: %.4f mm (band max %.3e rad)\n", s.optimum_mm,
                  s.residual_rad);
      std::printf("uncompensated      : %.3e rad, suppression x%.0f\n", s.uncompensated_rad,
                  s.used_residual_rad > 0 ? s.uncompensated_rad / s.used_residual_rad : 0.0);
      if (s.multiple_minima) std::printf("warning: objective had multiple scan minima\n");
    } else if (hwp->parsed()) {
      const auto s = pairgen::cmd_hwp_design(cfg, opt.out_dir);
      std::printf("quartz %.4f mm, MgF2 %.4f mm\n", s.hwp.t_quartz_mm, s.hwp.t_mgf2_mm);
      std::printf("band max |G - pi|  : %.4f rad\n", s.band_max_deviation_rad);
      std::printf("pump residual      : %.4f rad\n", s.pump_residual_rad);
    } else if (curves->parsed()) {
      pairgen::cmd_curves(cfg, opt.out_dir);
      std::printf("wrote %s/single_polarizer.dat and %s/two_polarizer.dat\n",
                  opt.out_dir.c_str(), opt.out_dir.c_str());
    } else if (simulate->parsed()) {
      const auto path = pairgen::cmd_simulate(cfg, opt.out_dir);
      std::printf("wrote %s (seed %llu)\n", path.string().c_str(),
                  static_cast<unsigned long long>(cfg.seed));
    } else if (fit->parsed()) {
      const std::string input =
          opt.input.empty() ? opt.out_dir + "/sweep.dat" : opt.input;
      const auto f = pairgen::cmd_fit(cfg, input, opt.out_dir);
      std::printf("a = %.6f, b = %.6f, amplitude = %.2f\n", f.a, f.b, f.amplitude);
      std::printf("fidelity = %.5f  (68%% CI [%.5f, %.5f], %d resamples)\n", f.fidelity,
                  f.ci_fidelity.lo, f.ci_fidelity.hi, f.n_bootstrap);
    } else if (replicate->parsed()) {
      const auto report = pairgen::cmd_replicate(cfg, opt.out_dir);
      print_replication(report);
    }
  } catch (const pairgen::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const pairgen::NotPhaseMatchable& e) {
    std::cerr << "not phase-matchable: " << e.what() << "\n";
    return kExitNotPhaseMatchable;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return 0;
}
