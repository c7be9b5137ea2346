// SPDX-License-Identifier: Apache-2.0
#include "pairgen/tomofit.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>

#include "pairgen/rng.hpp"

namespace pairgen {

namespace {

constexpr double kPi = std::numbers::pi;

struct DesignPoint {
  double u, v, w;  // f = amp*(u + a*v + b*w)
  double y;        // (possibly accidental-corrected) counts
  double wgt;      // 1/max(raw_count, 1)
};

std::vector<DesignPoint> build_design(const MeasurementRecord& rec, const FitOptions& opts) {
  std::vector<DesignPoint> pts(rec.angles_deg.size());
  const bool subtract =
      opts.accidental_window_s > 0.0 && !rec.singles_1.empty() && !rec.singles_2.empty();
  for (size_t i = 0; i < pts.size(); ++i) {
    const double a = rec.angles_deg[i] * kPi / 180.0;
    const double c2 = std::cos(a) * std::cos(a);
    const double s2 = std::sin(a) * std::sin(a);
    const double c4 = c2 * c2, s4 = s2 * s2;
    double y = rec.coincidences[i];
    if (subtract) {
      // S1*S2*tau/T accidental counts expected in this bin
      y -= rec.singles_1[i] * rec.singles_2[i] * opts.accidental_window_s /
           rec.integration_s[i];
    }
    pts[i] = {0.5 * (c4 + s4), 0.5 * (c4 - s4), c2 * s2, y,
              1.0 / std::max(rec.coincidences[i], 1.0)};
  }
  return pts;
}

double cost(const std::vector<DesignPoint>& pts, double amp, double a, double b) {
  double s = 0.0;
  for (const auto& p : pts) {
    const double r = p.y - amp * (p.u + a * p.v + b * p.w);
    s += p.wgt * r * r;
  }
  return s;
}

FitResult finalize(double amp, double a, double b, bool converged) {
  // project onto the closed unit disk; exact statement of (p, x, theta) existence
  const double r = std::hypot(a, b);
  if (r > 1.0) {
    a /= r;
    b /= r;
  }
  FitResult out;
  out.a = a;
  out.b = b;
  out.amplitude = amp;
  out.fidelity = std::sqrt(std::max(0.0, 0.5 * (1.0 - b)));
  out.converged = converged;
  return out;
}

}  // namespace

void MeasurementRecord::validate() const {
  const size_t n = angles_deg.size();
  if (coincidences.size() != n || integration_s.size() != n) {
    throw std::invalid_argument("angle, coincidence and integration columns differ in length");
  }
  if (!singles_1.empty() || !singles_2.empty()) {
    if (singles_1.size() != n || singles_2.size() != n) {
      throw std::invalid_argument("singles columns must match the angle column");
    }
  }
  for (size_t i = 0; i < n; ++i) {
    if (!(coincidences[i] >= 0.0) || !std::isfinite(coincidences[i])) {
      throw std::invalid_argument("coincidence counts must be non-negative");
    }
    if (!(integration_s[i] > 0.0)) {
      throw std::invalid_argument("integration times must be positive");
    }
  }
  std::vector<double> sorted(angles_deg);
  std::sort(sorted.begin(), sorted.end());
  size_t distinct = sorted.empty() ? 0 : 1;
  for (size_t i = 1; i < sorted.size(); ++i) {
    if (sorted[i] - sorted[i - 1] > 1e-9) ++distinct;
  }
  if (distinct < 8) {
    throw std::invalid_argument("need at least 8 distinct polarizer angles");
  }
  if (sorted.back() - sorted.front() < 135.0) {
    throw std::invalid_argument("polarizer angles must span at least 135 deg");
  }
}

FitResult fit_single_polarizer(const MeasurementRecord& rec, const FitOptions& opts) {
  rec.validate();
  const auto pts = build_design(rec, opts);

  // Weighted linear solve in (amp*A, amp*B, amp*C) seeds the iteration; the
  // model is an exact reparameterization of it.
  Eigen::Matrix3d ata = Eigen::Matrix3d::Zero();
  Eigen::Vector3d aty = Eigen::Vector3d::Zero();
  for (const auto& p : pts) {
    const double c4 = p.u + p.v, s4 = p.u - p.v;  // recover cos^4, sin^4
    const Eigen::Vector3d row(c4, s4, p.w);
    ata += p.wgt * row * row.transpose();
    aty += p.wgt * row * p.y;
  }
  Eigen::FullPivLU<Eigen::Matrix3d> lu(ata);
  if (lu.rank() < 3) {
    throw std::invalid_argument("degenerate sweep: design matrix is rank-deficient");
  }
  const Eigen::Vector3d pqr = lu.solve(aty);
  double amp = pqr(0) + pqr(1);
  if (!(amp > 0.0)) {
    throw std::invalid_argument("degenerate sweep: no positive amplitude fits the counts");
  }
  double a = (pqr(0) - pqr(1)) / amp;
  double b = pqr(2) / amp;

  // Levenberg-Marquardt polish in (amp, a, b)
  double lambda = 1e-3;
  double current = cost(pts, amp, a, b);
  bool converged = false;
  for (int iter = 0; iter < opts.max_iterations; ++iter) {
    Eigen::Matrix3d jtj = Eigen::Matrix3d::Zero();
    Eigen::Vector3d jtr = Eigen::Vector3d::Zero();
    for (const auto& p : pts) {
      const double shape = p.u + a * p.v + b * p.w;
      const double r = p.y - amp * shape;
      const Eigen::Vector3d j(shape, amp * p.v, amp * p.w);
      jtj += p.wgt * j * j.transpose();
      jtr += p.wgt * j * r;
    }
    Eigen::Matrix3d damped = jtj;
    damped.diagonal() += lambda * jtj.diagonal();
    const Eigen::Vector3d step = damped.ldlt().solve(jtr);
    const double trial = cost(pts, amp + step(0), a + step(1), b + step(2));
    if (trial < current) {
      amp += step(0);
      a += step(1);
      b += step(2);
      lambda = std::max(lambda * 0.3, 1e-12);
      const double rel = (current - trial) / std::max(current, 1e-300);
      current = trial;
      if (rel < 1e-12 || step.cwiseAbs().maxCoeff() < 1e-12) {
        converged = true;
        break;
      }
    } else {
      lambda *= 10.0;
      if (lambda > 1e12) {
        converged = true;  // stuck at a (local) minimum of a well-behaved model
        break;
      }
    }
  }
  if (!converged) {
    throw FitNotConverged("single-polarizer fit did not converge",
                          finalize(amp, a, b, false));
  }
  return finalize(amp, a, b, true);
}

FitResult bootstrap(const MeasurementRecord& rec, int n, std::uint64_t seed,
                    const FitOptions& opts) {
  if (n < 100) throw std::invalid_argument("bootstrap needs n >= 100 resamples");
  FitResult base = fit_single_polarizer(rec, opts);

  // substream space disjoint from the sweep generator's (seed, angle index)
  constexpr std::uint64_t kBootstrapSalt = 0x626f6f74ull << 32;

  std::vector<double> fidelities;
  fidelities.reserve(static_cast<size_t>(n));
  int failures = 0;
  for (int k = 0; k < n; ++k) {
    Rng rng = Rng::substream(seed, kBootstrapSalt + static_cast<std::uint64_t>(k));
    MeasurementRecord resampled = rec;
    for (size_t i = 0; i < rec.coincidences.size(); ++i) {
      resampled.coincidences[i] = static_cast<double>(rng.poisson(rec.coincidences[i]));
      if (!rec.singles_1.empty()) {
        resampled.singles_1[i] = static_cast<double>(rng.poisson(rec.singles_1[i]));
        resampled.singles_2[i] = static_cast<double>(rng.poisson(rec.singles_2[i]));
      }
    }
    try {
      fidelities.push_back(fit_single_polarizer(resampled, opts).fidelity);
    } catch (const std::exception&) {
      ++failures;
    }
  }
  if (failures * 10 > n) {
    throw BootstrapUnstable("more than 10% of bootstrap resamples failed to fit (" +
                            std::to_string(failures) + "/" + std::to_string(n) + ")");
  }

  std::sort(fidelities.begin(), fidelities.end());
  const auto quantile = [&](double q) {
    const double pos = q * static_cast<double>(fidelities.size() - 1);
    const size_t lo = static_cast<size_t>(pos);
    const size_t hi = std::min(lo + 1, fidelities.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return fidelities[lo] * (1.0 - frac) + fidelities[hi] * frac;
  };
  base.ci_fidelity = {quantile(0.16), quantile(0.84), true};
  base.n_bootstrap = static_cast<int>(fidelities.size());
  return base;
}

ConstrainedState constrained_state(const FitResult& fit, StateConstraint constraint) {
  ConstrainedState out;
  out.constraint = constraint;
  if (constraint == StateConstraint::UnitPurity) {
    out.p = 1.0;
    out.x = 0.5 * (1.0 + fit.a);
    const double denom = 2.0 * std::sqrt(std::max(0.0, out.x * (1.0 - out.x)));
    if (denom == 0.0) {
      out.theta_rad = 0.0;  // phase undefined for a product state
    } else {
      out.theta_rad = std::acos(std::clamp(fit.b / denom, -1.0, 1.0));
    }
  } else {
    // theta = pi: b = -2 p sqrt(x(1-x)), a = p(2x - 1), so p = hypot(a, b)
    out.theta_rad = kPi;
    out.p = std::hypot(fit.a, fit.b);
    out.x = out.p == 0.0 ? 0.5 : 0.5 * (1.0 + fit.a / out.p);
  }
  return out;
}

namespace {

struct Sinusoid {
  double mean, amp_cos, amp_sin;  // y = m + A cos(2 phi) + B sin(2 phi)
  Eigen::Matrix3d cov;
};

Sinusoid fit_sinusoid(const MeasurementRecord& rec) {
  rec.validate();
  Eigen::Matrix3d ata = Eigen::Matrix3d::Zero();
  Eigen::Vector3d aty = Eigen::Vector3d::Zero();
  for (size_t i = 0; i < rec.angles_deg.size(); ++i) {
    const double ph = 2.0 * rec.angles_deg[i] * kPi / 180.0;
    const Eigen::Vector3d row(1.0, std::cos(ph), std::sin(ph));
    const double wgt = 1.0 / std::max(rec.coincidences[i], 1.0);
    ata += wgt * row * row.transpose();
    aty += wgt * row * rec.coincidences[i];
  }
  Eigen::FullPivLU<Eigen::Matrix3d> lu(ata);
  if (lu.rank() < 3) {
    throw std::invalid_argument("degenerate sweep: sinusoid design is rank-deficient");
  }
  const Eigen::Vector3d sol = lu.solve(aty);
  return {sol(0), sol(1), sol(2), lu.inverse()};
}

BasisVisibility sinusoid_visibility(const Sinusoid& fit) {
  if (!(fit.mean > 0.0)) {
    throw std::invalid_argument("sinusoid fit has a non-positive mean rate");
  }
  const double radius = std::hypot(fit.amp_cos, fit.amp_sin);
  const double vis = radius / fit.mean;
  Eigen::Vector3d grad;
  if (radius == 0.0) {
    grad << 0.0, 1.0 / fit.mean, 1.0 / fit.mean;
  } else {
    grad << -radius / (fit.mean * fit.mean), fit.amp_cos / (radius * fit.mean),
        fit.amp_sin / (radius * fit.mean);
  }
  const double var = grad.transpose() * fit.cov * grad;
  return {vis, std::sqrt(std::max(0.0, var))};
}

}  // namespace

TwoPolarizerResult fidelity_from_two_polarizer(const MeasurementRecord& hv,
                                               const MeasurementRecord& da,
                                               const MeasurementRecord& lr) {
  TwoPolarizerResult out;
  const MeasurementRecord* recs[3] = {&hv, &da, &lr};
  double sum_v = 0.0, sum_var = 0.0;
  for (int k = 0; k < 3; ++k) {
    out.bases[static_cast<size_t>(k)] = sinusoid_visibility(fit_sinusoid(*recs[k]));
    const auto& bv = out.bases[static_cast<size_t>(k)];
    if (bv.visibility > 1.0 + 1e-12) out.unphysical = true;
    sum_v += bv.visibility;
    sum_var += bv.sigma * bv.sigma;
  }
  out.fidelity = std::sqrt(std::max(0.0, 0.25 * (1.0 + sum_v)));
  out.sigma = out.fidelity > 0.0 ? std::sqrt(sum_var) / (8.0 * out.fidelity) : 0.0;
  return out;
}

}  // namespace pairgen
