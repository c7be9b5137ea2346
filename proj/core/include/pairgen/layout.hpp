// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "pairgen/materials.hpp"
#include "pairgen/waveplate.hpp"

namespace pairgen {

// Geometry of the two-crystal stack: both optic axes parallel, the pump and
// the extraordinary-polarized pair photons walking off in the same vertical
// plane.

struct SourceLayout {
  double crystal_length_mm = 0.0;  // each of the two crystals
  double cut_angle_deg = 0.0;
  double pump_nm = 0.0;
  double degenerate_nm = 0.0;
  CompositeWaveplate hwp;
  double compensator_length_mm = 0.0;

  void validate() const;  // positive finite lengths, cut angle in (0, 90) deg
};

struct BeamGeometry {
  double pump_fwhm_major_um = 0.0;  // major axis along the walk-off direction
  double pump_fwhm_minor_um = 0.0;
  double collection_fwhm_um = 0.0;

  void validate() const;  // all positive, major >= minor
};

// Transverse displacement accumulated over a crystal of the given length,
// length * tan(walk-off angle).
double lateral_displacement_um(const Material& m, double theta_deg, double lambda_nm,
                               double length_mm);

// Fractional mismatch between the exit displacements of pairs born in the
// first and second crystals. Pairs from crystal 1 leave at
// L tan(rho_pump) + L tan(rho_pair); pairs from crystal 2 at 2 L tan(rho_pump)
// (the pump walks off in crystal 1, the rotated pair photons in crystal 2;
// emission is referenced to the birth-crystal exit). Normalizing by the pump
// displacement per crystal makes the result independent of L:
//
//   mismatch = |tan(rho_pump) - tan(rho_pair)| / tan(rho_pump)
//
// with the pair walk-off evaluated at the degenerate wavelength.
double emission_mismatch(const Material& crystal, const SourceLayout& layout);

// Normalized overlap of two 1-D Gaussian amplitude profiles with the given
// FWHMs and centre offset; 1 for identical modes, 0 for fully displaced ones.
double gaussian_mode_overlap(double displacement_um, double fwhm_a_um, double fwhm_b_um);

}  // namespace pairgen
