// SPDX-License-Identifier: Apache-2.0
#include "pairgen/expsim.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "pairgen/rng.hpp"

namespace pairgen {

void DetectorModel::validate() const {
  if (!(efficiency >= 0.0 && efficiency <= 1.0)) {
    throw std::invalid_argument("detector efficiency must lie in [0, 1]");
  }
  if (!(dark_rate_hz >= 0.0) || !(dead_time_s >= 0.0)) {
    throw std::invalid_argument("dark rate and dead time must be non-negative");
  }
}

void ExperimentConfig::validate() const {
  if (!(pump_power_mw >= 0.0) || !(brightness_pairs_per_s_mw >= 0.0)) {
    throw std::invalid_argument("power and brightness must be non-negative");
  }
  if (!(coincidence_window_s >= 0.0)) {
    throw std::invalid_argument("coincidence window must be non-negative");
  }
  if (!(integration_time_s > 0.0)) {
    throw std::invalid_argument("integration time must be positive");
  }
  state.validate();
  detector_s.validate();
  detector_i.validate();
  if (!(heralding_s > 0.0 && heralding_s <= 1.0) || !(heralding_i > 0.0 && heralding_i <= 1.0)) {
    throw std::domain_error(
        "heralding efficiencies must lie in (0, 1]; a zero heralding would send the partner "
        "singles rate to infinity");
  }
}

TrueRates true_rates(const ExperimentConfig& cfg) {
  cfg.validate();
  const double pair = cfg.brightness_pairs_per_s_mw * cfg.pump_power_mw;
  return {pair, pair / cfg.heralding_i, pair / cfg.heralding_s};
}

double accidental_rate(double singles_1_hz, double singles_2_hz, double window_s) {
  if (singles_1_hz < 0.0 || singles_2_hz < 0.0 || window_s < 0.0) {
    throw std::invalid_argument("accidental-rate inputs must be non-negative");
  }
  return singles_1_hz * singles_2_hz * window_s;
}

double saturate(double true_rate_hz, double dead_time_s) {
  if (true_rate_hz < 0.0 || dead_time_s < 0.0) {
    throw std::invalid_argument("rates and dead times must be non-negative");
  }
  return true_rate_hz / (1.0 + true_rate_hz * dead_time_s);
}

DetectedRates sweep_expectation(const ExperimentConfig& cfg, double angle_deg) {
  const TrueRates rates = true_rates(cfg);

  // single-photon marginal of the state in each arm: P(H) = p x + (1 - p)/2
  const double prob_h = cfg.state.p * cfg.state.x + 0.5 * (1.0 - cfg.state.p);
  const double a = angle_deg * std::numbers::pi / 180.0;
  const double c2 = std::cos(a) * std::cos(a);
  const double transmission = prob_h * c2 + (1.0 - prob_h) * (1.0 - c2);

  const double flux_s =
      rates.singles_s_hz * transmission * cfg.detector_s.efficiency + cfg.detector_s.dark_rate_hz;
  const double flux_i =
      rates.singles_i_hz * transmission * cfg.detector_i.efficiency + cfg.detector_i.dark_rate_hz;

  const double det_s = saturate(flux_s, cfg.detector_s.dead_time_s);
  const double det_i = saturate(flux_i, cfg.detector_i.dead_time_s);
  const double live_s = flux_s > 0.0 ? det_s / flux_s : 1.0;
  const double live_i = flux_i > 0.0 ? det_i / flux_i : 1.0;

  const double pair_flux = rates.pair_hz * single_polarizer_rate(cfg.state, angle_deg) *
                           cfg.detector_s.efficiency * cfg.detector_i.efficiency;
  const double coincidences =
      pair_flux * live_s * live_i + accidental_rate(det_s, det_i, cfg.coincidence_window_s);
  return {coincidences, det_s, det_i};
}

MeasurementRecord generate_sweep(const ExperimentConfig& cfg,
                                 std::span<const double> angles_deg) {
  if (angles_deg.empty()) {
    throw std::invalid_argument("sweep needs at least one analyzer angle");
  }
  MeasurementRecord rec;
  const size_t n = angles_deg.size();
  rec.angles_deg.assign(angles_deg.begin(), angles_deg.end());
  rec.coincidences.resize(n);
  rec.integration_s.assign(n, cfg.integration_time_s);
  rec.singles_1.resize(n);
  rec.singles_2.resize(n);
  for (size_t i = 0; i < n; ++i) {
    const DetectedRates r = sweep_expectation(cfg, angles_deg[i]);
    Rng rng = Rng::substream(cfg.seed, static_cast<std::uint64_t>(i));
    rec.coincidences[i] =
        static_cast<double>(rng.poisson(r.coincidence_hz * cfg.integration_time_s));
    rec.singles_1[i] = static_cast<double>(rng.poisson(r.singles_s_hz * cfg.integration_time_s));
    rec.singles_2[i] = static_cast<double>(rng.poisson(r.singles_i_hz * cfg.integration_time_s));
  }
  return rec;
}

namespace {

// transmission of one arm's single-photon marginal through its analyzer
double arm_transmission(const TwoPhotonState& s, double angle_deg, AnalyzerBasis basis) {
  const double prob_h = s.p * s.x + 0.5 * (1.0 - s.p);
  if (basis == AnalyzerBasis::Circular) return 0.5;  // phase analyzers pass half of H/V light
  const double a = angle_deg * std::numbers::pi / 180.0;
  const double c2 = std::cos(a) * std::cos(a);
  return prob_h * c2 + (1.0 - prob_h) * (1.0 - c2);
}

}  // namespace

DetectedRates two_polarizer_expectation(const ExperimentConfig& cfg, double fixed_deg,
                                        double swept_deg, AnalyzerBasis basis) {
  const TrueRates rates = true_rates(cfg);
  const double swept_setting = basis == AnalyzerBasis::Circular ? 2.0 * swept_deg : swept_deg;

  const double flux_s = rates.singles_s_hz * arm_transmission(cfg.state, fixed_deg, basis) *
                            cfg.detector_s.efficiency +
                        cfg.detector_s.dark_rate_hz;
  const double flux_i = rates.singles_i_hz * arm_transmission(cfg.state, swept_setting, basis) *
                            cfg.detector_i.efficiency +
                        cfg.detector_i.dark_rate_hz;
  const double det_s = saturate(flux_s, cfg.detector_s.dead_time_s);
  const double det_i = saturate(flux_i, cfg.detector_i.dead_time_s);
  const double live_s = flux_s > 0.0 ? det_s / flux_s : 1.0;
  const double live_i = flux_i > 0.0 ? det_i / flux_i : 1.0;

  const double pair_flux = rates.pair_hz *
                           two_polarizer_rate(cfg.state, fixed_deg, swept_setting, basis) *
                           cfg.detector_s.efficiency * cfg.detector_i.efficiency;
  const double coincidences =
      pair_flux * live_s * live_i + accidental_rate(det_s, det_i, cfg.coincidence_window_s);
  return {coincidences, det_s, det_i};
}

MeasurementRecord generate_two_polarizer_sweep(const ExperimentConfig& cfg, double fixed_deg,
                                               std::span<const double> angles_deg,
                                               AnalyzerBasis basis) {
  if (angles_deg.empty()) {
    throw std::invalid_argument("sweep needs at least one analyzer angle");
  }
  MeasurementRecord rec;
  const size_t n = angles_deg.size();
  rec.angles_deg.assign(angles_deg.begin(), angles_deg.end());
  rec.coincidences.resize(n);
  rec.integration_s.assign(n, cfg.integration_time_s);
  rec.singles_1.resize(n);
  rec.singles_2.resize(n);
  for (size_t i = 0; i < n; ++i) {
    const DetectedRates r = two_polarizer_expectation(cfg, fixed_deg, angles_deg[i], basis);
    Rng rng = Rng::substream(cfg.seed, static_cast<std::uint64_t>(i));
    rec.coincidences[i] =
        static_cast<double>(rng.poisson(r.coincidence_hz * cfg.integration_time_s));
    rec.singles_1[i] = static_cast<double>(rng.poisson(r.singles_s_hz * cfg.integration_time_s));
    rec.singles_2[i] = static_cast<double>(rng.poisson(r.singles_i_hz * cfg.integration_time_s));
  }
  return rec;
}

double heralding_efficiency(double coincidences, double singles, double dark_counts,
                            double integration_s) {
  if (!(integration_s > 0.0)) {
    throw std::invalid_argument("integration time must be positive");
  }
  if (coincidences < 0.0 || dark_counts < 0.0) {
    throw std::invalid_argument("counts must be non-negative");
  }
  if (!(singles > dark_counts)) {
    throw std::domain_error("singles must exceed the dark counts being subtracted");
  }
  return coincidences / (singles - dark_counts);
}

}  // namespace pairgen
