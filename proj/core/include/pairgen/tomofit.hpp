// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace pairgen {

// Recovery of the two-photon state from polarizer sweeps. The single-polarizer
// curve identifies exactly two shape parameters besides the amplitude,
//
//   R(alpha) = amplitude [ A cos^4 a + B sin^4 a + C cos^2 a sin^2 a ],
//   A + B = 1,  a = A - B = p(2x - 1),  b = C = 2 p sqrt(x(1-x)) cos(theta),
//
// so the fit works in (amplitude, a, b); (p, x, theta) individually are only
// reported under an explicit constraint. Fidelity to the phi-minus target is
// sqrt((1 - b)/2) and depends on b alone.

struct MeasurementRecord {
  std::vector<double> angles_deg;
  std::vector<double> coincidences;
  std::vector<double> integration_s;  // per point
  std::vector<double> singles_1;      // optional, empty or matching length
  std::vector<double> singles_2;

  // equal lengths, non-negative counts, >= 8 distinct angles spanning >= 135 deg
  void validate() const;
};

struct ConfidenceInterval {
  double lo = 0.0;
  double hi = 0.0;
  bool valid = false;
};

struct FitResult {
  double a = 0.0;          // p(2x - 1)
  double b = 0.0;          // 2 p sqrt(x(1-x)) cos(theta)
  double amplitude = 0.0;  // counts scale
  double fidelity = 0.0;   // to phi-minus, sqrt((1 - b)/2)
  ConfidenceInterval ci_fidelity;  // central 68%, set by bootstrap()
  int n_bootstrap = 0;
  bool converged = false;
};

struct FitOptions {
  // When > 0 and singles are present, S1*S2*window/T accidental counts are
  // subtracted from each point before fitting.
  double accidental_window_s = 0.0;
  int max_iterations = 200;
};

class FitNotConverged : public std::runtime_error {
 public:
  FitNotConverged(const std::string& what, FitResult best_point)
      : std::runtime_error(what), best(best_point) {}
  FitResult best;
};

class BootstrapUnstable : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Weighted nonlinear least squares of the single-polarizer model with Poisson
// weights (variance = max(count, 1)); (a, b) projected onto the unit disk at
// convergence.
FitResult fit_single_polarizer(const MeasurementRecord& rec, const FitOptions& opts = {});

// Parametric bootstrap: every count is resampled from a Poisson law with mean
// equal to the observed count, the fit repeated, and the central 68% interval
// of the fidelity taken across resamples. Deterministic for a fixed seed;
// per-resample substreams make the result independent of evaluation order.
// Throws BootstrapUnstable when more than 10% of resample fits fail.
FitResult bootstrap(const MeasurementRecord& rec, int n, std::uint64_t seed,
                    const FitOptions& opts = {});

// (p, x, theta) from a fit under an explicit constraint. The single-polarizer
// curve cannot identify all three, so the constraint is part of the result.
enum class StateConstraint { UnitPurity, PhasePi };
struct ConstrainedState {
  double p = 0.0;
  double x = 0.0;
  double theta_rad = 0.0;
  StateConstraint constraint = StateConstraint::UnitPurity;
};
ConstrainedState constrained_state(const FitResult& fit, StateConstraint constraint);

// Two-polarizer route: one record per basis, each a sweep of one analyzer
// with the other fixed. Visibilities come from a weighted sinusoid fit,
// uncertainties from first-order error propagation.
struct BasisVisibility {
  double visibility = 0.0;
  double sigma = 0.0;
};
struct TwoPolarizerResult {
  std::array<BasisVisibility, 3> bases;  // H/V, D/A, L/R
  double fidelity = 0.0;
  double sigma = 0.0;
  bool unphysical = false;  // some fitted visibility exceeded 1
};
TwoPolarizerResult fidelity_from_two_polarizer(const MeasurementRecord& hv,
                                               const MeasurementRecord& da,
                                               const MeasurementRecord& lr);

}  // namespace pairgen
