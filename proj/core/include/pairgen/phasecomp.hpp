// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <span>
#include <stdexcept>
#include <vector>

#include "pairgen/layout.hpp"
#include "pairgen/materials.hpp"
#include "pairgen/waveplate.hpp"

namespace pairgen {

// Relative phase between the |VV> and |HH> pair amplitudes accumulated
// through the crystal / half-wave-plate / compensator stack, together with
// the achromatic half-wave-plate designer and the compensator-length
// optimizer that flattens the phase over the emission band.

struct PhaseCurve {
  std::vector<double> wavelengths_nm;  // signal axis
  std::vector<double> phase_rad;       // offset-subtracted at the degenerate wavelength
};

enum class HwpPhaseMode {
  // Pair photons pick up the mean of the two principal-axis dynamic phases.
  MeanPhase,
  // Waveplate treated as wavelength-flat (sensitivity-analysis mode).
  Constant,
};

struct HwpDesignOptions {
  double t_max_mm = 4.0;          // search square [0, t_max]^2
  double coarse_step_mm = 0.002;  // pitch of the first grid pass
  double pump_tolerance_rad = 0.1;
  int band_samples = 21;
};

struct CompensatorOptions {
  double scan_hi_mm = 10.0;
  double scan_step_mm = 0.01;
  double refine_tol_mm = 0.001;
  int band_samples = 71;
};

struct CompensatorOptimum {
  double length_mm = 0.0;
  double band_max_residual_rad = 0.0;
  // The scanned objective had more than one local minimum; length_mm is the
  // global scan minimum.
  bool multiple_minima = false;
};

class InfeasibleHwpDesign : public std::runtime_error {
 public:
  InfeasibleHwpDesign(const std::string& what, CompositeWaveplate best_found,
                      double objective_rad, double pump_residual_rad)
      : std::runtime_error(what),
        best(best_found),
        objective(objective_rad),
        pump_residual(pump_residual_rad) {}

  CompositeWaveplate best;
  double objective;
  double pump_residual;
};

// Dynamic phase 2 pi n L / lambda of a single element.
double element_phase(const Material& m, Polarization pol, double lambda_nm, double length_mm);

// Same for an extraordinary wave propagating at theta to the optic axis.
double element_phase_effective(const Material& m, double theta_deg, double lambda_nm,
                               double length_mm);

// Distance of x to target modulo 2 pi, in [0, pi].
double mod_2pi_distance(double x_rad, double target_rad);

class PhaseModel {
 public:
  explicit PhaseModel(SourceMaterials mats, HwpPhaseMode mode = HwpPhaseMode::MeanPhase);

  // Mean of the two principal-axis dynamic phases of the composite plate
  // (zero in Constant mode).
  double hwp_phase(const CompositeWaveplate& hwp, double lambda_nm) const;

  // Retardance 2 pi [dn_quartz(l) t_quartz - dn_mgf2(l) t_mgf2] / l, dn = n_e - n_o.
  double hwp_retardance(const CompositeWaveplate& hwp, double lambda_nm) const;

  // Grid-plus-refinement search for the thinnest composite plate that is
  // half-wave across [band_lo, band_hi] and full-wave at the pump. Throws
  // InfeasibleHwpDesign when no plate in the search square meets the pump
  // constraint.
  CompositeWaveplate design_hwp(double band_lo_nm, double band_hi_nm, double pump_nm,
                                const HwpDesignOptions& opts = {}) const;

  // Relative phase (first-crystal minus second-crystal pairs) at one signal
  // wavelength; the idler follows from energy conservation. Terms picked up
  // by the pump are dropped as constants. No offset subtraction.
  double relative_phase(const SourceLayout& layout, double signal_nm) const;

  // relative_phase over a signal grid, with the value at the degenerate
  // wavelength subtracted.
  PhaseCurve relative_phase_curve(const SourceLayout& layout,
                                  std::span<const double> signal_nm) const;

  // Compensator length minimizing the band maximum of |dphi(l) - dphi(l_deg)|:
  // 0.01 mm scan, then golden-section refinement to 0.001 mm. Ties break
  // toward the smaller length.
  CompensatorOptimum optimize_compensator(const SourceLayout& layout, double band_lo_nm,
                                          double band_hi_nm,
                                          const CompensatorOptions& opts = {}) const;

  const SourceMaterials& materials() const { return mats_; }
  HwpPhaseMode hwp_mode() const { return mode_; }

 private:
  SourceMaterials mats_;
  HwpPhaseMode mode_;
};

}  // namespace pairgen
