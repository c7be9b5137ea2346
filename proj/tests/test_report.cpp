// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "pairgen/phasematch.hpp"
#include "pairgen/report.hpp"
#include "test_helpers.hpp"

using namespace pairgen;

namespace {

namespace fs = std::filesystem;

fs::path scratch(const std::string& leaf) {
  const fs::path dir = fs::temp_directory_path() / "pairgen_test" / leaf;
  fs::create_directories(dir);
  return dir;
}

RunConfig quick_config() {
  RunConfig cfg = load_config(fs::path(PAIRGEN_DATA_DIR) / "default.cfg");
  cfg.replicate_experiments = 40;  // keep the unit suite quick
  cfg.replicate_bootstrap = 150;
  cfg.n_bootstrap = 150;
  return cfg;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

TEST_CASE("resolve_design fills the free quantities") {
  const ResolvedDesign rd = resolve_design(quick_config());
  CHECK(rd.idler_nm == doctest::Approx(847.1159).epsilon(1e-6));
  CHECK(rd.cut_solved_deg == doctest::Approx(28.6461).epsilon(1e-4));
  CHECK(rd.hwp.t_quartz_mm > 0.5);
  CHECK(rd.hwp.t_mgf2_mm > 0.5);
  CHECK(std::fabs(rd.compensator.length_mm - 3.12) <= 0.25);
  CHECK(rd.layout.compensator_length_mm == rd.compensator.length_mm);  // auto mode
}

TEST_CASE("resolve_design rejects a cut angle that cannot phase-match") {
  RunConfig cfg = quick_config();
  cfg.cut_angle_deg = 0.0;
  CHECK_THROWS_AS(resolve_design(cfg), NotPhaseMatchable);
  cfg.cut_angle_deg = 45.0;
  CHECK_THROWS_AS(resolve_design(cfg), NotPhaseMatchable);
}

TEST_CASE("design report carries the published geometry") {
  const fs::path out = scratch("design");
  const DesignSummary s = cmd_design(quick_config(), out);
  CHECK(std::fabs(s.cut_solved_deg - 28.8) <= 0.2);
  CHECK(s.mismatch >= 0.045);
  CHECK(s.mismatch <= 0.075);
  CHECK(s.overlap_pair_modes > 0.9);  // the self-compensated modes mostly overlap
  CHECK(std::fabs(s.emission_signal_nm - 776.0) < 0.5);

  const std::string json = slurp(out / "design.json");
  CHECK(json.find("cut_angle_solved_deg") != std::string::npos);
  CHECK(json.find("emission_mismatch") != std::string::npos);
  CHECK(json.find("fnv1a64:") != std::string::npos);
  CHECK(json.find("walkoff") != std::string::npos);
}

TEST_CASE("compensate emits plot files and the optimum") {
  const fs::path out = scratch("compensate");
  const CompensateSummary s = cmd_compensate(quick_config(), out);
  CHECK(std::fabs(s.optimum_mm - 3.12) <= 0.25);
  CHECK(s.uncompensated_rad / s.used_residual_rad >= 10.0);
  CHECK_FALSE(s.multiple_minima);

  for (const char* name : {"phase_compensated.dat", "phase_uncompensated.dat"}) {
    const std::string dat = slurp(out / name);
    CHECK(dat.find("signal_nm phase_rad") != std::string::npos);
    CHECK(dat.find("fnv1a64:") != std::string::npos);
  }
}

TEST_CASE("explicit compensator length is honored (negative control)") {
  RunConfig cfg = quick_config();
  cfg.compensator_length_mm = 0.0;
  const CompensateSummary s = cmd_compensate(cfg, scratch("compensate0"));
  CHECK(s.used_mm == 0.0);
  CHECK(s.used_residual_rad == doctest::Approx(s.uncompensated_rad).epsilon(1e-12));
  CHECK(std::fabs(s.optimum_mm - 3.12) <= 0.25);  // the optimizer itself is unaffected
}

TEST_CASE("hwp design command") {
  const fs::path out = scratch("hwp");
  const HwpSummary s = cmd_hwp_design(quick_config(), out);
  CHECK(s.band_max_deviation_rad <= 0.1 + 1e-9);
  CHECK(s.pump_residual_rad <= 0.1 + 1e-9);
  CHECK(slurp(out / "hwp_retardance.dat").find("retardance_rad") != std::string::npos);
}

TEST_CASE("simulate and fit close the loop") {
  const fs::path out = scratch("simfit");
  RunConfig cfg = quick_config();
  const fs::path sweep = cmd_simulate(cfg, out);
  CHECK(fs::exists(sweep));
  const FitResult fit = cmd_fit(cfg, sweep, out);
  CHECK(fit.converged);
  CHECK(fit.fidelity > 0.98);
  CHECK(fit.fidelity < 1.0);
  CHECK(fit.ci_fidelity.valid);
  const std::string json = slurp(out / "fit.json");
  CHECK(json.find("\"input\"") != std::string::npos);
  CHECK(json.find("n_bootstrap") != std::string::npos);
}

TEST_CASE("replication table is deterministic for a fixed seed") {
  RunConfig cfg = quick_config();
  cfg.replicate_experiments = 8;
  const fs::path out_a = scratch("rep_a");
  const fs::path out_b = scratch("rep_b");
  const ReplicationReport a = cmd_replicate(cfg, out_a);
  const ReplicationReport b = cmd_replicate(cfg, out_b);
  CHECK(a.criteria.size() == 10);
  for (size_t i = 0; i < a.criteria.size(); ++i) {
    CHECK(a.criteria[i].measured == b.criteria[i].measured);
    CHECK(a.criteria[i].pass == b.criteria[i].pass);
  }
  CHECK(slurp(out_a / "replicate.json") == slurp(out_b / "replicate.json"));
}

#ifdef PAIRGEN_CLI_PATH
TEST_CASE("command-line tool end to end") {
  const fs::path out = scratch("cli");
  const std::string cli = PAIRGEN_CLI_PATH;
  const std::string cfg = (fs::path(PAIRGEN_DATA_DIR) / "default.cfg").string();

  const auto run = [&](const std::string& args) {
    const std::string cmd = cli + " " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
  };

  CHECK(run("design --config " + cfg + " --out " + out.string()) == 0);
  CHECK(fs::exists(out / "design.json"));
  CHECK(run("simulate --config " + cfg + " --out " + out.string()) == 0);
  CHECK(run("fit --config " + cfg + " --out " + out.string()) == 0);
  CHECK(fs::exists(out / "fit.json"));
  CHECK(run("curves --config " + cfg + " --out " + out.string()) == 0);
  CHECK(fs::exists(out / "single_polarizer.dat"));

  // the sweep is byte-identical under one seed and changes under another
  const fs::path out2 = scratch("cli2");
  CHECK(run("simulate --config " + cfg + " --seed 5 --out " + out.string()) == 0);
  CHECK(run("simulate --config " + cfg + " --seed 5 --out " + out2.string()) == 0);
  CHECK(slurp(out / "sweep.dat") == slurp(out2 / "sweep.dat"));
  CHECK(run("simulate --config " + cfg + " --seed 6 --out " + out2.string()) == 0);
  CHECK(slurp(out / "sweep.dat") != slurp(out2 / "sweep.dat"));

  // a reduced replication run end to end
  const fs::path small = out / "small.cfg";
  std::ofstream(small) << "[materials]\ndatabase = " << PAIRGEN_DATA_DIR
                       << "/materials.db\n[replicate]\nexperiments = 8\nbootstrap = 120\n";
  CHECK(run("replicate --config " + small.string() + " --out " + out.string()) == 0);
  CHECK(fs::exists(out / "replicate.json"));

  // config error and not-phase-matchable exit codes
  CHECK(run("design --config /nonexistent.cfg --out " + out.string()) == 2);
  const fs::path bad = out / "bad.cfg";
  std::ofstream(bad) << "[materials]\ndatabase = " << PAIRGEN_DATA_DIR
                     << "/materials.db\n[layout]\ncut_angle_deg = 0.0\n";
  CHECK(run("design --config " + bad.string() + " --out " + out.string()) == 3);
}
#endif
