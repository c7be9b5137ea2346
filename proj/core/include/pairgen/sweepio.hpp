// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>

#include "pairgen/tomofit.hpp"

namespace pairgen {

// Provenance stamped into every file the tool writes.
struct Provenance {
  std::uint64_t config_checksum = 0;
  std::uint64_t seed = 0;
};

// Delimited sweep file: '#' provenance comments, a mandatory header line
// naming the columns, then one row per analyzer angle.
//
//   angle_deg coincidences singles_1 singles_2 integration_s
//
// The singles columns may be absent.
void write_sweep(const std::filesystem::path& path, const MeasurementRecord& rec,
                 const Provenance& prov);

MeasurementRecord read_sweep(const std::filesystem::path& path);

}  // namespace pairgen
