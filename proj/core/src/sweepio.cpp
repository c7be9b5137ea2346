// SPDX-License-Identifier: Apache-2.0
#include "pairgen/sweepio.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>
#include <vector>

#include "pairgen/checksum.hpp"
#include "pairgen/version.hpp"

namespace pairgen {

void write_sweep(const std::filesystem::path& path, const MeasurementRecord& rec,
                 const Provenance& prov) {
  rec.validate();
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write sweep file: " + path.string());
  out << "# pairgen sweep v1\n";
  out << "# version: " << kVersion << "\n";
  out << "# config: fnv1a64:" << to_hex(prov.config_checksum) << "\n";
  out << "# seed: " << prov.seed << "\n";
  const bool singles = !rec.singles_1.empty();
  out << (singles ? "angle_deg coincidences singles_1 singles_2 integration_s"
                  : "angle_deg coincidences integration_s")
      << "\n";
  out << std::setprecision(17);
  for (size_t i = 0; i < rec.angles_deg.size(); ++i) {
    out << rec.angles_deg[i] << ' ' << rec.coincidences[i];
    if (singles) out << ' ' << rec.singles_1[i] << ' ' << rec.singles_2[i];
    out << ' ' << rec.integration_s[i] << '\n';
  }
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

MeasurementRecord read_sweep(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open sweep file: " + path.string());

  std::string line;
  bool header_seen = false;
  bool singles = false;
  MeasurementRecord rec;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::string body = line;
    for (char& c : body) {
      if (c == ',' || c == '\t') c = ' ';  // accept comma- or tab-delimited rows
    }
    std::istringstream row(body);
    std::string first;
    if (!(row >> first) || first[0] == '#') continue;

    if (!header_seen) {
      // header line names the columns
      if (first != "angle_deg") {
        throw std::runtime_error(path.string() + ":" + std::to_string(line_no) +
                                 ": missing header line (expected 'angle_deg ...')");
      }
      std::vector<std::string> cols{first};
      std::string c;
      while (row >> c) cols.push_back(c);
      if (cols == std::vector<std::string>{"angle_deg", "coincidences", "singles_1", "singles_2",
                                           "integration_s"}) {
        singles = true;
      } else if (cols == std::vector<std::string>{"angle_deg", "coincidences", "integration_s"}) {
        singles = false;
      } else {
        throw std::runtime_error(path.string() + ":" + std::to_string(line_no) +
                                 ": unrecognized column layout");
      }
      header_seen = true;
      continue;
    }

    std::istringstream fields(body);
    double angle, coinc, s1 = 0, s2 = 0, integ;
    bool ok = static_cast<bool>(fields >> angle >> coinc);
    if (ok && singles) ok = static_cast<bool>(fields >> s1 >> s2);
    if (ok) ok = static_cast<bool>(fields >> integ);
    std::string extra;
    if (!ok || (fields >> extra)) {
      throw std::runtime_error(path.string() + ":" + std::to_string(line_no) +
                               ": malformed data row");
    }
    rec.angles_deg.push_back(angle);
    rec.coincidences.push_back(coinc);
    rec.integration_s.push_back(integ);
    if (singles) {
      rec.singles_1.push_back(s1);
      rec.singles_2.push_back(s2);
    }
  }
  if (!header_seen) {
    throw std::runtime_error(path.string() + ": empty sweep file (header line required)");
  }
  rec.validate();
  return rec;
}

}  // namespace pairgen
