// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "pairgen/config.hpp"
#include "pairgen/layout.hpp"
#include "pairgen/materials.hpp"
#include "pairgen/phasecomp.hpp"
#include "pairgen/tomofit.hpp"

namespace pairgen {

// Pipeline stages behind the command-line tool. Every command writes
// machine-readable output plus plot-ready delimited files into an output
// directory; all files carry provenance (config checksum, seed, version).

// Materials loaded and the free design quantities filled in: idler from
// energy conservation, cut angle solved, waveplate designed and compensator
// optimized when the config leaves them on "auto".
struct ResolvedDesign {
  SourceMaterials mats;
  double idler_nm = 0.0;
  double cut_solved_deg = 0.0;
  CompositeWaveplate hwp;
  CompensatorOptimum compensator;
  SourceLayout layout;  // configured cut angle, resolved element lengths
};
ResolvedDesign resolve_design(const RunConfig& cfg);

struct DesignSummary {
  double idler_nm = 0.0;
  double cut_solved_deg = 0.0;
  double emission_signal_nm = 0.0;
  double emission_idler_nm = 0.0;
  double walkoff_pump_deg = 0.0;
  double walkoff_pair_deg = 0.0;
  double displacement_pump_um = 0.0;
  double displacement_pair_um = 0.0;
  double mismatch = 0.0;
  double overlap_pair_modes = 0.0;   // crystal-1 vs crystal-2 pair modes
  double overlap_collection = 0.0;   // displaced pair mode vs collection mode
};
DesignSummary cmd_design(const RunConfig& cfg, const std::filesystem::path& out_dir);

struct CompensateSummary {
  double optimum_mm = 0.0;
  double residual_rad = 0.0;        // band-max |dphi| at the optimum
  double used_mm = 0.0;             // length actually placed in the layout
  double used_residual_rad = 0.0;   // band-max |dphi| at used_mm
  double uncompensated_rad = 0.0;   // band-max |dphi| without the compensator
  bool multiple_minima = false;
};
CompensateSummary cmd_compensate(const RunConfig& cfg, const std::filesystem::path& out_dir);

struct HwpSummary {
  CompositeWaveplate hwp;
  double band_max_deviation_rad = 0.0;  // max |retardance - pi| (mod 2pi) over the band
  double pump_residual_rad = 0.0;       // |retardance| (mod 2pi) at the pump
};
HwpSummary cmd_hwp_design(const RunConfig& cfg, const std::filesystem::path& out_dir);

void cmd_curves(const RunConfig& cfg, const std::filesystem::path& out_dir);

// Writes the sweep file consumed by cmd_fit; returns its path.
std::filesystem::path cmd_simulate(const RunConfig& cfg, const std::filesystem::path& out_dir);

FitResult cmd_fit(const RunConfig& cfg, const std::filesystem::path& sweep_file,
                  const std::filesystem::path& out_dir);

// One replication criterion: the measured value against the embedded target.
struct CriterionResult {
  int index = 0;
  std::string name;
  std::string measured;
  std::string target;
  bool pass = false;
  double runtime_s = 0.0;
};
struct ReplicationReport {
  std::vector<CriterionResult> criteria;
  bool all_pass = false;
};

// Runs the full replication table (design, compensation, correlation
// signatures, tomography round trip, saturation). Heavy: the tomography
// study alone runs cfg.replicate_experiments seeded experiments.
ReplicationReport run_replication(const RunConfig& cfg);

ReplicationReport cmd_replicate(const RunConfig& cfg, const std::filesystem::path& out_dir);

}  // namespace pairgen
