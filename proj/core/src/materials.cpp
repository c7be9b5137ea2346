// SPDX-License-Identifier: Apache-2.0
#include "pairgen/materials.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "pairgen/checksum.hpp"

namespace pairgen {

std::string to_hex(std::uint64_t value) {
  static const char* digits = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[i] = digits[value & 0xf];
    value >>= 4;
  }
  return out;
}

double DispersionRelation::n_squared(double lambda_um) const {
  const double l2 = lambda_um * lambda_um;
  double n2 = constant + quadratic * l2;
  for (const auto& [b, c] : resonances) n2 += b * l2 / (l2 - c);
  for (const auto& [d, e] : poles) n2 += d / (l2 - e);
  return n2;
}

namespace {

const DispersionRelation& relation(const Material& m, Polarization pol) {
  return pol == Polarization::Ordinary ? m.ordinary : m.extraordinary;
}

void check_range(const Material& m, double lambda_nm) {
  if (!(lambda_nm >= m.lambda_min_nm && lambda_nm <= m.lambda_max_nm)) {
    std::ostringstream os;
    os << "wavelength " << lambda_nm << " nm outside the validity range of " << m.name << " ["
       << m.lambda_min_nm << ", " << m.lambda_max_nm << "] nm";
    throw std::out_of_range(os.str());
  }
}

void check_theta(double theta_deg) {
  if (!(theta_deg >= 0.0 && theta_deg <= 90.0)) {
    throw std::domain_error("propagation angle must lie in [0, 90] deg, got " +
                            std::to_string(theta_deg));
  }
}

}  // namespace

double refractive_index(const Material& m, Polarization pol, double lambda_nm) {
  check_range(m, lambda_nm);
  const double n2 = relation(m, pol).n_squared(lambda_nm * 1e-3);
  if (!(n2 > 1.0)) {
    throw std::out_of_range("dispersion relation of " + m.name +
                            " evaluated to a non-physical index at " + std::to_string(lambda_nm) +
                            " nm");
  }
  return std::sqrt(n2);
}

double effective_extraordinary_index(const Material& m, double theta_deg, double lambda_nm) {
  check_theta(theta_deg);
  const double no = refractive_index(m, Polarization::Ordinary, lambda_nm);
  const double ne = refractive_index(m, Polarization::Extraordinary, lambda_nm);
  const double t = theta_deg * std::numbers::pi / 180.0;
  const double c = std::cos(t), s = std::sin(t);
  return 1.0 / std::sqrt(c * c / (no * no) + s * s / (ne * ne));
}

double walkoff_angle_deg(const Material& m, double theta_deg, double lambda_nm) {
  check_theta(theta_deg);
  const double no = refractive_index(m, Polarization::Ordinary, lambda_nm);
  const double ne = refractive_index(m, Polarization::Extraordinary, lambda_nm);
  const double neff = effective_extraordinary_index(m, theta_deg, lambda_nm);
  const double t = theta_deg * std::numbers::pi / 180.0;
  const double tan_rho = 0.5 * neff * neff * std::sin(2.0 * t) *
                         std::fabs(1.0 / (ne * ne) - 1.0 / (no * no));
  return std::atan(tan_rho) * 180.0 / std::numbers::pi;
}

// --- database parsing -------------------------------------------------------

namespace {

[[noreturn]] void parse_fail(const std::string& origin, int line, const std::string& what) {
  throw std::runtime_error(origin + ":" + std::to_string(line) + ": " + what);
}

std::string unquote(std::string s) {
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') return s.substr(1, s.size() - 2);
  return s;
}

// index lines:
//   <o|e> pole <A> <B> <C> <D>                 n^2 = A + B/(l2 - C) + D*l2
//   <o|e> sellmeier <A> <B1> <C1> [...]        C given as pole wavelength in um
//   <o|e> sellmeier2 <A> <B1> <C1> [...]       C given in um^2
DispersionRelation parse_relation(std::istringstream& in, const std::string& origin, int line) {
  std::string form;
  if (!(in >> form)) parse_fail(origin, line, "missing dispersion form");
  DispersionRelation rel;
  if (form == "pole") {
    double a, b, c, d;
    if (!(in >> a >> b >> c >> d)) parse_fail(origin, line, "pole form needs 4 coefficients");
    rel.constant = a;
    rel.poles.push_back({b, c});
    rel.quadratic = d;
  } else if (form == "sellmeier" || form == "sellmeier2") {
    if (!(in >> rel.constant)) parse_fail(origin, line, "missing constant term");
    double b, c;
    while (in >> b >> c) {
      if (form == "sellmeier") c = c * c;  // pole position given as wavelength
      rel.resonances.push_back({b, c});
    }
    if (rel.resonances.empty()) parse_fail(origin, line, "sellmeier form needs B/C pairs");
  } else {
    parse_fail(origin, line, "unknown dispersion form '" + form + "'");
  }
  return rel;
}

}  // namespace

MaterialDatabase MaterialDatabase::parse(std::string_view text, const std::string& origin) {
  MaterialDatabase db;
  db.checksum_ = fnv1a64(text);

  std::istringstream stream{std::string(text)};
  std::string raw;
  int line_no = 0;
  Material current;
  bool in_material = false;
  bool has_o = false, has_e = false;

  while (std::getline(stream, raw)) {
    ++line_no;
    if (!raw.empty() && raw.back() == '\r') raw.pop_back();
    std::istringstream in(raw);
    std::string key;
    if (!(in >> key) || key[0] == '#') continue;

    if (key == "checksum") {
      std::string algo, digest;
      if (!(in >> algo >> digest) || algo != "fnv1a64") {
        parse_fail(origin, line_no, "checksum line must read 'checksum fnv1a64 <hex>'");
      }
      // the digest covers every byte after this line
      const auto tell = stream.tellg();
      const size_t after = tell < 0 ? text.size() : static_cast<size_t>(tell);
      db.checksum_ = fnv1a64(after <= text.size() ? text.substr(after) : std::string_view{});
      if (to_hex(db.checksum_) != digest) {
        parse_fail(origin, line_no,
                   "database checksum mismatch: expected " + digest + ", computed " +
                       to_hex(db.checksum_));
      }
      continue;
    }

    if (key == "material") {
      if (in_material) parse_fail(origin, line_no, "nested material record");
      current = Material{};
      if (!(in >> current.name)) parse_fail(origin, line_no, "material needs a name");
      in_material = true;
      has_o = has_e = false;
    } else if (!in_material) {
      parse_fail(origin, line_no, "'" + key + "' outside a material record");
    } else if (key == "uniaxial") {
      std::string sign;
      in >> sign;
      if (sign == "negative")
        current.uniaxial_sign = UniaxialSign::Negative;
      else if (sign == "positive")
        current.uniaxial_sign = UniaxialSign::Positive;
      else
        parse_fail(origin, line_no, "uniaxial sign must be 'negative' or 'positive'");
    } else if (key == "range_nm") {
      if (!(in >> current.lambda_min_nm >> current.lambda_max_nm) ||
          current.lambda_min_nm >= current.lambda_max_nm) {
        parse_fail(origin, line_no, "range_nm needs <lo> <hi> with lo < hi");
      }
    } else if (key == "source" || key == "note") {
      std::string rest;
      std::getline(in, rest);
      const auto first = rest.find_first_not_of(" \t");
      rest = first == std::string::npos ? std::string{} : rest.substr(first);
      (key == "source" ? current.source : current.note) = unquote(std::move(rest));
    } else if (key == "o") {
      current.ordinary = parse_relation(in, origin, line_no);
      has_o = true;
    } else if (key == "e") {
      current.extraordinary = parse_relation(in, origin, line_no);
      has_e = true;
    } else if (key == "end") {
      if (!has_o || !has_e) parse_fail(origin, line_no, current.name + ": missing o or e set");
      if (current.lambda_max_nm <= 0) parse_fail(origin, line_no, current.name + ": missing range_nm");
      db.materials_.push_back(std::move(current));
      in_material = false;
    } else {
      parse_fail(origin, line_no, "unknown key '" + key + "'");
    }
  }
  if (in_material) throw std::runtime_error(origin + ": unterminated material record");
  if (db.materials_.empty()) throw std::runtime_error(origin + ": no material records");
  return db;
}

MaterialDatabase MaterialDatabase::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open material database: " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str(), path.string());
}

const Material& MaterialDatabase::get(std::string_view name) const {
  for (const auto& m : materials_) {
    if (m.name == name) return m;
  }
  throw std::out_of_range("material '" + std::string(name) + "' not in database");
}

bool MaterialDatabase::contains(std::string_view name) const {
  for (const auto& m : materials_) {
    if (m.name == name) return true;
  }
  return false;
}

}  // namespace pairgen
