// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <filesystem>

#include "pairgen/materials.hpp"

namespace testutil {

inline const pairgen::MaterialDatabase& db() {
  static const pairgen::MaterialDatabase instance =
      pairgen::MaterialDatabase::load(std::filesystem::path(PAIRGEN_DATA_DIR) / "materials.db");
  return instance;
}

inline std::filesystem::path data_dir() { return PAIRGEN_DATA_DIR; }

// Independent dispersion oracles: hand-coded closed forms, deliberately
// bypassing DispersionRelation and the database parser. lambda in um.
namespace oracle {

inline double bbo_no(double l) {
  const double l2 = l * l;
  return std::sqrt(2.7405 + 0.0184 / (l2 - 0.0179) - 0.0155 * l2);
}
inline double bbo_ne(double l) {
  const double l2 = l * l;
  return std::sqrt(2.3730 + 0.0128 / (l2 - 0.0156) - 0.0044 * l2);
}
inline double yvo4_no(double l) {
  const double l2 = l * l;
  return std::sqrt(3.77834 + 0.069736 / (l2 - 0.04724) - 0.0108133 * l2);
}
inline double yvo4_ne(double l) {
  const double l2 = l * l;
  return std::sqrt(4.59905 + 0.110534 / (l2 - 0.04813) - 0.0122676 * l2);
}
inline double mgf2_no(double l) {
  const double l2 = l * l;
  return std::sqrt(1.0 + 0.48755108 * l2 / (l2 - 0.04338408 * 0.04338408) +
                   0.39875031 * l2 / (l2 - 0.09461442 * 0.09461442) +
                   2.3120353 * l2 / (l2 - 23.793604 * 23.793604));
}
inline double mgf2_ne(double l) {
  const double l2 = l * l;
  return std::sqrt(1.0 + 0.41344023 * l2 / (l2 - 0.03684262 * 0.03684262) +
                   0.50497499 * l2 / (l2 - 0.09076162 * 0.09076162) +
                   2.4904862 * l2 / (l2 - 23.771995 * 23.771995));
}
inline double quartz_no(double l) {
  const double l2 = l * l;
  return std::sqrt(1.28604141 + 1.07044083 * l2 / (l2 - 1.00585997e-2) +
                   1.10202242 * l2 / (l2 - 100.0));
}
inline double quartz_ne(double l) {
  const double l2 = l * l;
  return std::sqrt(1.28851804 + 1.09509924 * l2 / (l2 - 1.02101864e-2) +
                   1.15662475 * l2 / (l2 - 100.0));
}

inline double n_eff(double no, double ne, double theta_deg) {
  const double t = theta_deg * M_PI / 180.0;
  const double c = std::cos(t), s = std::sin(t);
  return 1.0 / std::sqrt(c * c / (no * no) + s * s / (ne * ne));
}

inline double walkoff_deg(double no, double ne, double theta_deg) {
  const double neff = n_eff(no, ne, theta_deg);
  const double t = theta_deg * M_PI / 180.0;
  const double tan_rho =
      0.5 * neff * neff * std::sin(2.0 * t) * std::fabs(1.0 / (ne * ne) - 1.0 / (no * no));
  return std::atan(tan_rho) * 180.0 / M_PI;
}

}  // namespace oracle
}  // namespace testutil
