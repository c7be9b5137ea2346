// SPDX-License-Identifier: Apache-2.0
#include "pairgen/phasecomp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "pairgen/phasematch.hpp"

namespace pairgen {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::vector<double> linspace(double lo, double hi, int n) {
  std::vector<double> out(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) {
    out[static_cast<size_t>(i)] = lo + (hi - lo) * static_cast<double>(i) / (n - 1);
  }
  return out;
}

}  // namespace

double element_phase(const Material& m, Polarization pol, double lambda_nm, double length_mm) {
  if (length_mm == 0.0) return 0.0;
  return kTwoPi * refractive_index(m, pol, lambda_nm) * (length_mm * 1e6) / lambda_nm;
}

double element_phase_effective(const Material& m, double theta_deg, double lambda_nm,
                               double length_mm) {
  if (length_mm == 0.0) return 0.0;
  return kTwoPi * effective_extraordinary_index(m, theta_deg, lambda_nm) * (length_mm * 1e6) /
         lambda_nm;
}

double mod_2pi_distance(double x_rad, double target_rad) {
  return std::fabs(std::remainder(x_rad - target_rad, kTwoPi));
}

PhaseModel::PhaseModel(SourceMaterials mats, HwpPhaseMode mode)
    : mats_(std::move(mats)), mode_(mode) {}

double PhaseModel::hwp_phase(const CompositeWaveplate& hwp, double lambda_nm) const {
  if (mode_ == HwpPhaseMode::Constant) return 0.0;
  if (hwp.t_mgf2_mm == 0.0 && hwp.t_quartz_mm == 0.0) return 0.0;
  // crossed axes: one axis sees quartz-e plus mgf2-o, the other the converse
  const double axis_a = element_phase(mats_.hwp_quartz, Polarization::Extraordinary, lambda_nm,
                                      hwp.t_quartz_mm) +
                        element_phase(mats_.hwp_mgf2, Polarization::Ordinary, lambda_nm,
                                      hwp.t_mgf2_mm);
  const double axis_b = element_phase(mats_.hwp_quartz, Polarization::Ordinary, lambda_nm,
                                      hwp.t_quartz_mm) +
                        element_phase(mats_.hwp_mgf2, Polarization::Extraordinary, lambda_nm,
                                      hwp.t_mgf2_mm);
  return 0.5 * (axis_a + axis_b);
}

double PhaseModel::hwp_retardance(const CompositeWaveplate& hwp, double lambda_nm) const {
  double opd_nm = 0.0;  // birefringent optical path difference
  if (hwp.t_quartz_mm != 0.0) {
    const double dn = refractive_index(mats_.hwp_quartz, Polarization::Extraordinary, lambda_nm) -
                      refractive_index(mats_.hwp_quartz, Polarization::Ordinary, lambda_nm);
    opd_nm += dn * hwp.t_quartz_mm * 1e6;
  }
  if (hwp.t_mgf2_mm != 0.0) {
    const double dn = refractive_index(mats_.hwp_mgf2, Polarization::Extraordinary, lambda_nm) -
                      refractive_index(mats_.hwp_mgf2, Polarization::Ordinary, lambda_nm);
    opd_nm -= dn * hwp.t_mgf2_mm * 1e6;
  }
  return kTwoPi * opd_nm / lambda_nm;
}

CompositeWaveplate PhaseModel::design_hwp(double band_lo_nm, double band_hi_nm, double pump_nm,
                                          const HwpDesignOptions& opts) const {
  if (band_lo_nm > band_hi_nm) std::swap(band_lo_nm, band_hi_nm);
  if (!(band_lo_nm > pump_nm)) {
    throw std::invalid_argument("half-wave band must lie above the pump wavelength");
  }

  // retardance is linear in the thicknesses: G(l) = kq(l) t_q - km(l) t_m
  const auto band = linspace(band_lo_nm, band_hi_nm, opts.band_samples);
  std::vector<double> kq(band.size()), km(band.size());
  for (size_t i = 0; i < band.size(); ++i) {
    kq[i] = hwp_retardance({0.0, 1.0}, band[i]);
    km[i] = -hwp_retardance({1.0, 0.0}, band[i]);
  }
  const double kq_p = hwp_retardance({0.0, 1.0}, pump_nm);
  const double km_p = -hwp_retardance({1.0, 0.0}, pump_nm);

  const auto band_objective = [&](double tq, double tm, double cutoff) {
    double worst = 0.0;
    for (size_t i = 0; i < band.size(); ++i) {
      worst = std::max(worst, mod_2pi_distance(kq[i] * tq - km[i] * tm, std::numbers::pi));
      if (worst >= cutoff) break;
    }
    return worst;
  };
  const auto pump_residual = [&](double tq, double tm) {
    return mod_2pi_distance(kq_p * tq - km_p * tm, 0.0);
  };

  // The pump constraint confines the search to narrow diagonal stripes
  // kq_p tq - km_p tm = 2 pi m (one per full-wave count m at the pump). A
  // blind grid aliases across them, so scan along every stripe centreline
  // crossing the square instead; centreline points satisfy the constraint
  // exactly whenever the tolerance is positive.
  const double inf = std::numeric_limits<double>::infinity();
  double best_obj = inf, best_tq = 0.0, best_tm = 0.0;
  double best_any = inf, best_any_tq = 0.0, best_any_tm = 0.0;  // constraint ignored

  const auto m_min = static_cast<long>(std::ceil(-km_p * opts.t_max_mm / kTwoPi));
  const auto m_max = static_cast<long>(std::floor(kq_p * opts.t_max_mm / kTwoPi));
  const int n = static_cast<int>(opts.t_max_mm / opts.coarse_step_mm);
  for (long m = m_min; m <= m_max; ++m) {
    const double waves = kTwoPi * static_cast<double>(m);
    for (int j = 0; j <= n; ++j) {
      const double tm = j * opts.coarse_step_mm;
      const double tq = (waves + km_p * tm) / kq_p;
      if (tq < 0.0 || tq > opts.t_max_mm) continue;
      const double obj = band_objective(tq, tm, std::max(best_obj, best_any));
      if (obj < best_any) {
        best_any = obj;
        best_any_tq = tq;
        best_any_tm = tm;
      }
      if (pump_residual(tq, tm) >= opts.pump_tolerance_rad) continue;
      if (obj < best_obj - 1e-12 ||
          (std::fabs(obj - best_obj) <= 1e-12 && tq + tm < best_tq + best_tm)) {
        best_obj = obj;
        best_tq = tq;
        best_tm = tm;
      }
    }
  }
  if (!std::isfinite(best_obj)) {
    throw InfeasibleHwpDesign(
        "no composite plate in the search square satisfies the pump constraint",
        {best_any_tm, best_any_tq}, best_any, pump_residual(best_any_tq, best_any_tm));
  }

  // Pattern-search refinement under the same constraint. The feasible pump
  // stripes are ~1 um wide and run diagonally, so the walk continues down to
  // nm steps to reach the valley floor.
  for (double step = opts.coarse_step_mm / 2.0; step >= 1e-6; step /= 2.0) {
    bool improved = true;
    while (improved) {
      improved = false;
      for (int di = -1; di <= 1; ++di) {
        for (int dj = -1; dj <= 1; ++dj) {
          if (di == 0 && dj == 0) continue;
          const double tq = best_tq + di * step;
          const double tm = best_tm + dj * step;
          if (tq < 0.0 || tm < 0.0) continue;
          if (pump_residual(tq, tm) >= opts.pump_tolerance_rad) continue;
          const double obj = band_objective(tq, tm, best_obj);
          if (obj < best_obj - 1e-12) {
            best_obj = obj;
            best_tq = tq;
            best_tm = tm;
            improved = true;
          }
        }
      }
    }
  }
  return {best_tm, best_tq};
}

double PhaseModel::relative_phase(const SourceLayout& layout, double signal_nm) const {
  const double idler_nm = idler_wavelength(layout.pump_nm, signal_nm);
  const double l_bbo = layout.crystal_length_mm;
  const double l_comp = layout.compensator_length_mm;

  // first-crystal pairs: rotated by the plate, then extraordinary through the
  // second crystal, ordinary through the compensator
  double phi1 = hwp_phase(layout.hwp, signal_nm) + hwp_phase(layout.hwp, idler_nm);
  phi1 += element_phase_effective(mats_.crystal, layout.cut_angle_deg, signal_nm, l_bbo);
  phi1 += element_phase_effective(mats_.crystal, layout.cut_angle_deg, idler_nm, l_bbo);
  phi1 += element_phase(mats_.compensator, Polarization::Ordinary, signal_nm, l_comp);
  phi1 += element_phase(mats_.compensator, Polarization::Ordinary, idler_nm, l_comp);

  // second-crystal pairs: extraordinary through the compensator; the phase
  // through the first crystal and the plate is carried by the pump and drops
  // out as a constant
  double phi2 = element_phase(mats_.compensator, Polarization::Extraordinary, signal_nm, l_comp);
  phi2 += element_phase(mats_.compensator, Polarization::Extraordinary, idler_nm, l_comp);

  return phi1 - phi2;
}

PhaseCurve PhaseModel::relative_phase_curve(const SourceLayout& layout,
                                            std::span<const double> signal_nm) const {
  layout.validate();
  const double offset = relative_phase(layout, layout.degenerate_nm);
  PhaseCurve curve;
  curve.wavelengths_nm.assign(signal_nm.begin(), signal_nm.end());
  curve.phase_rad.reserve(signal_nm.size());
  for (double s : signal_nm) {
    curve.phase_rad.push_back(relative_phase(layout, s) - offset);
  }
  return curve;
}

CompensatorOptimum PhaseModel::optimize_compensator(const SourceLayout& layout,
                                                    double band_lo_nm, double band_hi_nm,
                                                    const CompensatorOptions& opts) const {
  if (band_lo_nm > band_hi_nm) std::swap(band_lo_nm, band_hi_nm);
  layout.validate();

  // dphi is linear in the compensator length: dphi(l; Lc) = base(l) + Lc*y(l).
  // Precompute the offset-subtracted pieces on the band grid once.
  const auto band = linspace(band_lo_nm, band_hi_nm, opts.band_samples);
  SourceLayout zero = layout;
  zero.compensator_length_mm = 0.0;
  SourceLayout unit = layout;
  unit.compensator_length_mm = 1.0;

  const double base_deg = relative_phase(zero, layout.degenerate_nm);
  const double slope_deg = relative_phase(unit, layout.degenerate_nm) - base_deg;
  std::vector<double> g(band.size()), h(band.size());
  for (size_t i = 0; i < band.size(); ++i) {
    const double base = relative_phase(zero, band[i]);
    g[i] = base - base_deg;
    h[i] = (relative_phase(unit, band[i]) - base) - slope_deg;
  }
  const auto band_max = [&](double lc) {
    double worst = 0.0;
    for (size_t i = 0; i < band.size(); ++i) {
      worst = std::max(worst, std::fabs(g[i] + lc * h[i]));
    }
    return worst;
  };

  // fixed-order scan; strict improvement keeps the smallest length on ties
  const int n_scan = static_cast<int>(opts.scan_hi_mm / opts.scan_step_mm);
  std::vector<double> scanned(static_cast<size_t>(n_scan) + 1);
  double best_val = std::numeric_limits<double>::infinity();
  int best_idx = 0;
  for (int i = 0; i <= n_scan; ++i) {
    scanned[static_cast<size_t>(i)] = band_max(i * opts.scan_step_mm);
    if (scanned[static_cast<size_t>(i)] < best_val) {
      best_val = scanned[static_cast<size_t>(i)];
      best_idx = i;
    }
  }

  // count interior local minima that are materially distinct
  int local_minima = 0;
  const double tol = 1e-9 * (1.0 + best_val);
  for (int i = 1; i < n_scan; ++i) {
    if (scanned[static_cast<size_t>(i)] < scanned[static_cast<size_t>(i - 1)] - tol &&
        scanned[static_cast<size_t>(i)] < scanned[static_cast<size_t>(i + 1)] - tol) {
      ++local_minima;
    }
  }

  // golden-section refinement around the scan minimum
  const double phi_inv = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = std::max(0.0, (best_idx - 1) * opts.scan_step_mm);
  double b = std::min(opts.scan_hi_mm, (best_idx + 1) * opts.scan_step_mm);
  double c = b - phi_inv * (b - a);
  double d = a + phi_inv * (b - a);
  double fc = band_max(c), fd = band_max(d);
  while (b - a > opts.refine_tol_mm) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - phi_inv * (b - a);
      fc = band_max(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + phi_inv * (b - a);
      fd = band_max(d);
    }
  }
  const double lc = 0.5 * (a + b);
  return {lc, band_max(lc), local_minima > 1};
}

}  // namespace pairgen
