// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace pairgen {

enum class Polarization { Ordinary, Extraordinary };
enum class UniaxialSign { Negative, Positive };

// One closed-form dispersion relation n^2(lambda), lambda in um. A single
// rational form covers all shipped coefficient sets:
//
//   n^2 = A + F*l2 + sum_i B_i*l2/(l2 - C_i) + sum_j D_j/(l2 - E_j),  l2 = lambda^2
//
// Evaluation uses the exact closed form; no interpolation tables.
struct DispersionRelation {
  double constant = 0.0;                          // A
  double quadratic = 0.0;                         // F
  std::vector<std::array<double, 2>> resonances;  // (B_i, C_i), C_i in um^2
  std::vector<std::array<double, 2>> poles;       // (D_j, E_j), E_j in um^2

  double n_squared(double lambda_um) const;
};

struct Material {
  std::string name;
  UniaxialSign uniaxial_sign = UniaxialSign::Negative;
  double lambda_min_nm = 0.0;  // validity window of the coefficient fit
  double lambda_max_nm = 0.0;
  std::string source;  // literature reference the coefficients were transcribed from
  std::string note;    // transcription remarks
  DispersionRelation ordinary;
  DispersionRelation extraordinary;
};

// Principal index n_o or n_e at a vacuum wavelength in nm.
// Throws std::out_of_range (naming the material and its bounds) outside the
// validity window.
double refractive_index(const Material& m, Polarization pol, double lambda_nm);

// Index seen by an extraordinary wave propagating at theta to the optic axis:
//   1/n^2 = cos^2(theta)/n_o^2 + sin^2(theta)/n_e^2.
// theta must lie in [0, 90] deg.
double effective_extraordinary_index(const Material& m, double theta_deg, double lambda_nm);

// Poynting walk-off magnitude of an extraordinary wave,
//   tan(rho) = (n_eff(theta)^2 / 2) * sin(2 theta) * |1/n_e^2 - 1/n_o^2|.
// The ray tilts away from the optic axis in negative uniaxial media and
// toward it in positive uniaxial media; the returned angle is >= 0.
double walkoff_angle_deg(const Material& m, double theta_deg, double lambda_nm);

// Plain-text material database. One record per material; coefficients are
// data, not code, so the dispersion inputs stay auditable. The file may carry
// a "checksum fnv1a64 <hex>" line covering everything after it; load()
// verifies it when present.
class MaterialDatabase {
 public:
  static MaterialDatabase load(const std::filesystem::path& path);
  static MaterialDatabase parse(std::string_view text, const std::string& origin = "<memory>");

  const Material& get(std::string_view name) const;
  bool contains(std::string_view name) const;
  const std::vector<Material>& materials() const { return materials_; }

  // FNV-1a 64 digest of the payload (everything after the checksum line, or
  // the whole text when no checksum line is present).
  std::uint64_t checksum() const { return checksum_; }

 private:
  std::vector<Material> materials_;
  std::uint64_t checksum_ = 0;
};

// The four materials of the source stack, resolved from a database.
struct SourceMaterials {
  Material crystal;      // SPDC crystal (negative uniaxial)
  Material compensator;  // birefringent phase compensator
  Material hwp_quartz;   // waveplate component entering the retardance with + sign
  Material hwp_mgf2;     // waveplate component entering the retardance with - sign
};

}  // namespace pairgen
