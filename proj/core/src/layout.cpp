// SPDX-License-Identifier: Apache-2.0
#include "pairgen/layout.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace pairgen {

void SourceLayout::validate() const {
  // zero length is allowed as the no-crystal limit of the phase analysis
  if (!(crystal_length_mm >= 0.0) || !std::isfinite(crystal_length_mm)) {
    throw std::invalid_argument("crystal length must be non-negative and finite");
  }
  if (!(cut_angle_deg > 0.0 && cut_angle_deg < 90.0)) {
    throw std::invalid_argument("cut angle must lie in (0, 90) deg");
  }
  if (!(pump_nm > 0.0) || !(degenerate_nm > pump_nm)) {
    throw std::invalid_argument("need 0 < pump wavelength < degenerate wavelength");
  }
  if (!(compensator_length_mm >= 0.0) || !std::isfinite(compensator_length_mm) ||
      !(hwp.t_mgf2_mm >= 0.0) || !(hwp.t_quartz_mm >= 0.0)) {
    throw std::invalid_argument("element lengths must be non-negative and finite");
  }
}

void BeamGeometry::validate() const {
  if (!(pump_fwhm_major_um > 0.0 && pump_fwhm_minor_um > 0.0 && collection_fwhm_um > 0.0)) {
    throw std::invalid_argument("beam widths must be positive");
  }
  if (pump_fwhm_major_um < pump_fwhm_minor_um) {
    throw std::invalid_argument("pump major axis must be at least the minor axis");
  }
}

double lateral_displacement_um(const Material& m, double theta_deg, double lambda_nm,
                               double length_mm) {
  const double rho = walkoff_angle_deg(m, theta_deg, lambda_nm);
  return length_mm * 1e3 * std::tan(rho * std::numbers::pi / 180.0);
}

double emission_mismatch(const Material& crystal, const SourceLayout& layout) {
  layout.validate();
  const double rho_pump =
      walkoff_angle_deg(crystal, layout.cut_angle_deg, layout.pump_nm);
  const double rho_pair =
      walkoff_angle_deg(crystal, layout.cut_angle_deg, layout.degenerate_nm);
  const double tan_pump = std::tan(rho_pump * std::numbers::pi / 180.0);
  const double tan_pair = std::tan(rho_pair * std::numbers::pi / 180.0);
  if (tan_pump == 0.0) {
    throw std::domain_error("pump walk-off vanishes; mismatch is undefined");
  }
  return std::fabs(tan_pump - tan_pair) / tan_pump;
}

double gaussian_mode_overlap(double displacement_um, double fwhm_a_um, double fwhm_b_um) {
  if (!(fwhm_a_um > 0.0) || !(fwhm_b_um > 0.0)) {
    throw std::domain_error("mode widths must be positive");
  }
  // amplitude sigma from FWHM
  const double k = 2.0 * std::sqrt(2.0 * std::numbers::ln2_v<double>);
  const double sa = fwhm_a_um / k;
  const double sb = fwhm_b_um / k;
  const double s2 = sa * sa + sb * sb;
  return std::sqrt(2.0 * sa * sb / s2) * std::exp(-displacement_um * displacement_um / (2.0 * s2));
}

}  // namespace pairgen
