// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>

namespace pairgen {

// Two-photon polarization states of the form
//
//   rho = p |psi><psi| + (1 - p)/2 (|HH><HH| + |VV><VV|),
//   |psi> = sqrt(x) |HH> + e^{i theta} sqrt(1 - x) |VV>,
//
// embedded in the two-qubit space with basis order (HH, HV, VH, VV); the
// HV/VH components are identically zero. theta = pi gives the phi-minus
// Bell state at p = 1, x = 1/2.

struct TwoPhotonState {
  double p = 1.0;        // purity weight of the coherent part
  double x = 0.5;        // balance between HH and VV
  double theta_rad = 0;  // relative phase, reduced to (-pi, pi]

  void validate() const;  // p, x in [0,1]
};

// Normalizes theta into (-pi, pi].
TwoPhotonState make_state(double p, double x, double theta_rad);

using DensityMatrix = Eigen::Matrix4cd;

DensityMatrix to_density_matrix(const TwoPhotonState& s);

// Hermitian to 1e-12, unit trace to 1e-12, smallest eigenvalue >= -1e-10.
// Throws std::domain_error otherwise.
void validate_density_matrix(const DensityMatrix& rho);

DensityMatrix bell_phi_minus();
DensityMatrix bell_phi_plus();

// Coincidence probability behind a single polarizer at angle alpha acting on
// both photons, <alpha alpha| rho |alpha alpha> with
// |alpha> = cos(alpha)|H> + sin(alpha)|V>. 0 deg = H, +45 deg = D, 90 deg = V.
double single_polarizer_rate(const TwoPhotonState& s, double alpha_deg);

enum class AnalyzerBasis {
  Linear,    // analyzer at the given angle, cos|H> + sin|V>
  Circular,  // (|H> + e^{i angle} |V>)/sqrt(2); +90 deg = L, -90 deg = R
};

// Coincidence probability with independent analyzers on the two arms.
double two_polarizer_rate(const TwoPhotonState& s, double beta_deg, double gamma_deg,
                          AnalyzerBasis basis);

// (max - min) / (max + min); requires max >= min >= 0 and max > 0.
double visibility(double curve_max, double curve_min);

// Uhlmann fidelity Tr sqrt(sqrt(rho) sigma sqrt(rho)) via Hermitian
// eigendecomposition. Equals sqrt(<phi|rho|phi>) for pure sigma.
double fidelity_trace(const DensityMatrix& rho, const DensityMatrix& sigma);

// sqrt((1 + v_hv + v_da + v_lr) / 4) from the three basis visibilities.
double fidelity_from_visibilities(double v_hv, double v_da, double v_lr);

}  // namespace pairgen
