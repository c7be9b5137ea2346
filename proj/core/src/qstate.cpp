// SPDX-License-Identifier: Apache-2.0
#include "pairgen/qstate.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

namespace pairgen {

namespace {

using Complex = std::complex<double>;
constexpr double kPi = std::numbers::pi;

Eigen::Vector2cd linear_analyzer(double angle_deg) {
  const double a = angle_deg * kPi / 180.0;
  return {Complex(std::cos(a), 0.0), Complex(std::sin(a), 0.0)};
}

Eigen::Vector2cd circular_analyzer(double phase_deg) {
  const double ph = phase_deg * kPi / 180.0;
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  return {Complex(inv_sqrt2, 0.0), std::polar(inv_sqrt2, ph)};
}

// sqrt of a Hermitian PSD matrix, eigenvalues clipped at zero
DensityMatrix hermitian_sqrt(const DensityMatrix& m) {
  Eigen::SelfAdjointEigenSolver<DensityMatrix> es(m);
  Eigen::Vector4d ev = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();
}

}  // namespace

void TwoPhotonState::validate() const {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("purity p must lie in [0, 1]");
  if (!(x >= 0.0 && x <= 1.0)) throw std::invalid_argument("balance x must lie in [0, 1]");
  if (!std::isfinite(theta_rad)) throw std::invalid_argument("theta must be finite");
}

TwoPhotonState make_state(double p, double x, double theta_rad) {
  double t = std::remainder(theta_rad, 2.0 * kPi);  // (-pi, pi], remainder gives [-pi, pi]
  if (t == -kPi) t = kPi;
  TwoPhotonState s{p, x, t};
  s.validate();
  return s;
}

DensityMatrix to_density_matrix(const TwoPhotonState& s) {
  s.validate();
  Eigen::Vector4cd psi = Eigen::Vector4cd::Zero();
  psi(0) = Complex(std::sqrt(s.x), 0.0);
  psi(3) = std::polar(std::sqrt(1.0 - s.x), s.theta_rad);
  DensityMatrix rho = s.p * (psi * psi.adjoint());
  const double mix = 0.5 * (1.0 - s.p);
  rho(0, 0) += mix;
  rho(3, 3) += mix;
  return rho;
}

void validate_density_matrix(const DensityMatrix& rho) {
  if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > 1e-12) {
    throw std::domain_error("density matrix is not Hermitian");
  }
  if (std::fabs(rho.trace().real() - 1.0) > 1e-12 || std::fabs(rho.trace().imag()) > 1e-12) {
    throw std::domain_error("density matrix trace differs from 1");
  }
  Eigen::SelfAdjointEigenSolver<DensityMatrix> es(rho, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -1e-10) {
    throw std::domain_error("density matrix is not positive semidefinite");
  }
}

DensityMatrix bell_phi_minus() { return to_density_matrix(make_state(1.0, 0.5, kPi)); }

DensityMatrix bell_phi_plus() { return to_density_matrix(make_state(1.0, 0.5, 0.0)); }

double single_polarizer_rate(const TwoPhotonState& s, double alpha_deg) {
  s.validate();
  const double a = alpha_deg * kPi / 180.0;
  const double c2 = std::cos(a) * std::cos(a);
  const double s2 = std::sin(a) * std::sin(a);
  const Complex amp = std::sqrt(s.x) * c2 + std::polar(std::sqrt(1.0 - s.x), s.theta_rad) * s2;
  return s.p * std::norm(amp) + 0.5 * (1.0 - s.p) * (c2 * c2 + s2 * s2);
}

double two_polarizer_rate(const TwoPhotonState& s, double beta_deg, double gamma_deg,
                          AnalyzerBasis basis) {
  const Eigen::Vector2cd e1 =
      basis == AnalyzerBasis::Linear ? linear_analyzer(beta_deg) : circular_analyzer(beta_deg);
  const Eigen::Vector2cd e2 =
      basis == AnalyzerBasis::Linear ? linear_analyzer(gamma_deg) : circular_analyzer(gamma_deg);
  Eigen::Vector4cd proj;
  proj << e1(0) * e2(0), e1(0) * e2(1), e1(1) * e2(0), e1(1) * e2(1);
  const DensityMatrix rho = to_density_matrix(s);
  return (proj.adjoint() * rho * proj).real()(0, 0);
}

double visibility(double curve_max, double curve_min) {
  if (!(curve_max >= curve_min) || curve_min < 0.0) {
    throw std::invalid_argument("need max >= min >= 0");
  }
  if (curve_max == 0.0) {
    throw std::domain_error("visibility undefined for an all-zero curve");
  }
  return (curve_max - curve_min) / (curve_max + curve_min);
}

double fidelity_trace(const DensityMatrix& rho, const DensityMatrix& sigma) {
  validate_density_matrix(rho);
  validate_density_matrix(sigma);
  const DensityMatrix root = hermitian_sqrt(rho);
  const DensityMatrix inner = root * sigma * root;
  Eigen::SelfAdjointEigenSolver<DensityMatrix> es(inner, Eigen::EigenvaluesOnly);
  // eigenvalues at solver-noise level would get amplified by the square
  // root (sqrt(1e-16) = 1e-8); drop them before summing
  const double floor = std::max(es.eigenvalues().maxCoeff(), 0.0) * 1e-13;
  double f = 0.0;
  for (int i = 0; i < 4; ++i) {
    const double ev = es.eigenvalues()(i);
    if (ev > floor) f += std::sqrt(ev);
  }
  return std::min(f, 1.0);
}

double fidelity_from_visibilities(double v_hv, double v_da, double v_lr) {
  for (double v : {v_hv, v_da, v_lr}) {
    if (!(v >= -1.0 && v <= 1.0)) {
      throw std::domain_error("visibilities must lie in [-1, 1]");
    }
  }
  const double arg = 0.25 * (1.0 + v_hv + v_da + v_lr);
  if (arg < 0.0) throw std::domain_error("fidelity argument is negative");
  return std::sqrt(arg);
}

}  // namespace pairgen
