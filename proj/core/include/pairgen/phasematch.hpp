// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <utility>

#include "pairgen/materials.hpp"

namespace pairgen {

// Collinear type-I critical phase matching: extraordinary pump decaying into
// an ordinary signal/idler pair, momentum matched by tilting the optic axis.

class NotPhaseMatchable : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct PhaseMatchSpec {
  double pump_nm = 0.0;
  double signal_nm = 0.0;  // signal is the shorter wavelength by convention
  double idler_nm = 0.0;
  double cut_angle_deg = 0.0;

  // Energy conservation |1/lp - 1/ls - 1/li| <= 1e-6 nm^-1 and signal <= idler.
  void validate() const;
};

// Idler wavelength from energy conservation, 1/li = 1/lp - 1/ls.
double idler_wavelength(double pump_nm, double signal_nm);

// Cut angle solving n_eff(theta, lp)/lp = n_o(ls)/ls + n_o(li)/li by bisection
// on [0.1, 89.9] deg to 1e-4 deg. Throws NotPhaseMatchable when the collinear
// condition has no root in the bracket.
double solve_cut_angle(const Material& crystal, double pump_nm, double signal_nm,
                       double idler_nm);

// The degenerate-adjacent (signal, idler) pair collinearly matched at the
// given cut angle. Inverse of solve_cut_angle; round-trips to well under
// 0.5 nm. Throws NotPhaseMatchable when no collinear pair exists.
std::pair<double, double> emission_wavelengths(const Material& crystal, double pump_nm,
                                               double cut_angle_deg);

}  // namespace pairgen
