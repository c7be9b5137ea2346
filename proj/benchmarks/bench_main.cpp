// SPDX-License-Identifier: Apache-2.0
#include <benchmark/benchmark.h>

#include <filesystem>
#include <vector>

#include "pairgen/expsim.hpp"
#include "pairgen/materials.hpp"
#include "pairgen/phasecomp.hpp"
#include "pairgen/phasematch.hpp"
#include "pairgen/qstate.hpp"
#include "pairgen/tomofit.hpp"

namespace {

using namespace pairgen;

const MaterialDatabase& db() {
  static const MaterialDatabase instance =
      MaterialDatabase::load(std::filesystem::path(PAIRGEN_DATA_DIR) / "materials.db");
  return instance;
}

const SourceMaterials& stack() {
  static const SourceMaterials mats{db().get("bbo"), db().get("yvo4"), db().get("quartz"),
                                    db().get("mgf2")};
  return mats;
}

std::vector<double> sweep_angles() {
  std::vector<double> a;
  for (int d = -90; d <= 90; d += 10) a.push_back(d);
  return a;
}

MeasurementRecord sample_record() {
  ExperimentConfig cfg;
  cfg.pump_power_mw = 0.1;
  cfg.brightness_pairs_per_s_mw = 65000.0;
  cfg.integration_time_s = 1.0;
  cfg.state = make_state(0.98005, 0.5, 3.14159265358979);
  cfg.heralding_s = 0.27;
  cfg.heralding_i = 0.22;
  cfg.seed = 1;
  return generate_sweep(cfg, sweep_angles());
}

void BM_RefractiveIndex(benchmark::State& state) {
  const Material& bbo = db().get("bbo");
  double nm = 700.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(refractive_index(bbo, Polarization::Ordinary, nm));
    nm = nm < 900.0 ? nm + 0.1 : 700.0;
  }
}
BENCHMARK(BM_RefractiveIndex);

void BM_SolveCutAngle(benchmark::State& state) {
  const Material& bbo = db().get("bbo");
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve_cut_angle(bbo, 405.0, 776.0, 847.1159029649596));
  }
}
BENCHMARK(BM_SolveCutAngle);

void BM_DesignHwp(benchmark::State& state) {
  const PhaseModel model(stack());
  for (auto _ : state) {
    benchmark::DoNotOptimize(model.design_hwp(760.0, 860.0, 405.0));
  }
}
BENCHMARK(BM_DesignHwp);

void BM_OptimizeCompensator(benchmark::State& state) {
  const PhaseModel model(stack());
  const CompositeWaveplate hwp = model.design_hwp(760.0, 860.0, 405.0);
  const SourceLayout layout{5.0, 28.8, 405.0, 810.0, hwp, 0.0};
  for (auto _ : state) {
    benchmark::DoNotOptimize(model.optimize_compensator(layout, 776.0, 847.1));
  }
}
BENCHMARK(BM_OptimizeCompensator);

void BM_FitSinglePolarizer(benchmark::State& state) {
  const MeasurementRecord rec = sample_record();
  for (auto _ : state) {
    benchmark::DoNotOptimize(fit_single_polarizer(rec));
  }
}
BENCHMARK(BM_FitSinglePolarizer);

void BM_Bootstrap(benchmark::State& state) {
  const MeasurementRecord rec = sample_record();
  for (auto _ : state) {
    benchmark::DoNotOptimize(bootstrap(rec, 250, 42));
  }
}
BENCHMARK(BM_Bootstrap);

void BM_GenerateSweep(benchmark::State& state) {
  ExperimentConfig cfg;
  cfg.pump_power_mw = 0.1;
  cfg.brightness_pairs_per_s_mw = 65000.0;
  cfg.integration_time_s = 1.0;
  cfg.state = make_state(0.98005, 0.5, 3.14159265358979);
  cfg.heralding_s = 0.27;
  cfg.heralding_i = 0.22;
  const auto angles = sweep_angles();
  std::uint64_t seed = 0;
  for (auto _ : state) {
    cfg.seed = seed++;
    benchmark::DoNotOptimize(generate_sweep(cfg, angles));
  }
}
BENCHMARK(BM_GenerateSweep);

void BM_FidelityTrace(benchmark::State& state) {
  const DensityMatrix rho = to_density_matrix(make_state(0.98, 0.5, 3.14));
  const DensityMatrix target = bell_phi_minus();
  for (auto _ : state) {
    benchmark::DoNotOptimize(fidelity_trace(rho, target));
  }
}
BENCHMARK(BM_FidelityTrace);

}  // namespace

BENCHMARK_MAIN();
