// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <span>

#include "pairgen/qstate.hpp"
#include "pairgen/tomofit.hpp"

namespace pairgen {

// Synthetic photon-counting experiments: Poisson coincidence and singles
// counts from the state's theory rates, with accidentals, dark counts and
// non-paralyzable detector dead time.

struct DetectorModel {
  double efficiency = 1.0;   // extra scaling; leave 1 when rates are detected rates
  double dark_rate_hz = 0.0;
  double dead_time_s = 0.0;

  void validate() const;
};

struct ExperimentConfig {
  double pump_power_mw = 0.0;
  double brightness_pairs_per_s_mw = 0.0;  // detected pair rate per mW, linear regime
  double coincidence_window_s = 0.0;
  double integration_time_s = 1.0;
  TwoPhotonState state;
  // Heralding efficiencies, partner-arm convention: heralding_s is the chance
  // of finding the signal once the idler fired, i.e. pairs / idler singles.
  double heralding_s = 1.0;
  double heralding_i = 1.0;
  DetectorModel detector_s;
  DetectorModel detector_i;
  std::uint64_t seed = 0;

  void validate() const;
};

struct TrueRates {
  double pair_hz = 0.0;
  double singles_s_hz = 0.0;
  double singles_i_hz = 0.0;
};

// pair = brightness * power; singles follow from the partner-arm heralding
// convention: singles_s = pair / heralding_i, singles_i = pair / heralding_s.
TrueRates true_rates(const ExperimentConfig& cfg);

// Uncorrelated joint detections, S1 * S2 * window.
double accidental_rate(double singles_1_hz, double singles_2_hz, double window_s);

// Non-paralyzable dead time: detected = true / (1 + true * dead_time).
double saturate(double true_rate_hz, double dead_time_s);

// Detected rates at one analyzer angle. The polarizer acts on both arms: it
// passes the state's single-photon marginal in each arm and projects the pair
// rate onto <alpha alpha|rho|alpha alpha>. Dead time throttles each arm's
// singles stream; a pair is recorded only when both detectors are live, so
// the coincidence flux carries the product of the two live fractions.
// Dark counts enter each arm's stream and the accidental estimate.
struct DetectedRates {
  double coincidence_hz = 0.0;
  double singles_s_hz = 0.0;
  double singles_i_hz = 0.0;
};
DetectedRates sweep_expectation(const ExperimentConfig& cfg, double angle_deg);

// Poisson counts for each angle, singles columns populated. Draws use
// counter-based substreams of (seed, angle index): bit-reproducible and
// independent of evaluation order.
MeasurementRecord generate_sweep(const ExperimentConfig& cfg, std::span<const double> angles_deg);

// Two independent analyzers: one fixed, the other swept. In the circular
// basis the swept analyzer phase advances at twice the recorded angle (a
// quarter-wave plate rotated by phi sweeps the analyzed phase by 2 phi), so
// every basis produces the same cos/sin(2 phi) curve shape.
DetectedRates two_polarizer_expectation(const ExperimentConfig& cfg, double fixed_deg,
                                        double swept_deg, AnalyzerBasis basis);
MeasurementRecord generate_two_polarizer_sweep(const ExperimentConfig& cfg, double fixed_deg,
                                               std::span<const double> angles_deg,
                                               AnalyzerBasis basis);

// coincidences / (singles - dark); all totals over the same integration time.
double heralding_efficiency(double coincidences, double singles, double dark_counts,
                            double integration_s);

}  // namespace pairgen
