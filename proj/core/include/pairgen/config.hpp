// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>

namespace pairgen {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Parsed key-value run configuration. Sections and keys are fixed; unknown
// ones are rejected so unit mistakes surface at parse time (every numeric key
// carries its unit in the name). Paths are resolved relative to the config
// file's directory.
struct RunConfig {
  // [materials]
  std::filesystem::path material_database;
  std::string crystal = "bbo";
  std::string compensator = "yvo4";
  std::string hwp_quartz = "quartz";
  std::string hwp_mgf2 = "mgf2";

  // [layout]
  double crystal_length_mm = 5.0;
  double cut_angle_deg = 28.8;
  double pump_nm = 405.0;
  double signal_nm = 776.0;  // target signal; idler follows from energy conservation
  double degenerate_nm = 810.0;
  std::optional<double> compensator_length_mm;  // empty = optimize
  std::optional<double> hwp_t_quartz_mm;        // empty = design
  std::optional<double> hwp_t_mgf2_mm;

  // [band]
  double band_signal_lo_nm = 776.0;
  double band_signal_hi_nm = 847.1;
  double hwp_band_lo_nm = 760.0;
  double hwp_band_hi_nm = 860.0;

  // [beam]
  double pump_fwhm_major_um = 133.0;
  double pump_fwhm_minor_um = 63.0;
  double collection_fwhm_um = 53.0;

  // [experiment]
  double pump_power_mw = 0.1;
  double brightness_pairs_per_s_mw = 65000.0;
  double coincidence_window_ns = 4.0;
  double integration_time_s = 1.0;
  double state_p = 0.98005;  // fidelity 0.995 to phi-minus at x = 1/2, theta = pi
  double state_x = 0.5;
  double state_theta_rad = std::numbers::pi;
  double heralding_signal = 0.27;
  double heralding_idler = 0.22;
  double dark_rate_signal_hz = 0.0;
  double dark_rate_idler_hz = 0.0;
  double dead_time_us = 1.0;
  std::uint64_t seed = 1;

  // [sweep]
  double sweep_start_deg = -90.0;
  double sweep_stop_deg = 90.0;
  double sweep_step_deg = 10.0;

  // [fit]
  int n_bootstrap = 500;
  double fit_accidental_window_ns = 0.0;  // 0 = fit raw counts

  // [replicate]
  int replicate_experiments = 500;
  int replicate_bootstrap = 250;

  std::uint64_t checksum = 0;  // fnv1a64 of the raw config bytes
  std::filesystem::path origin;

  void validate() const;
};

RunConfig load_config(const std::filesystem::path& path);
RunConfig parse_config(std::string_view text, const std::filesystem::path& origin);

}  // namespace pairgen
