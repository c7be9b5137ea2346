// SPDX-License-Identifier: Apache-2.0
#pragma once

namespace pairgen {

// Composite achromatic half-wave plate: one quartz and one MgF2 plate with
// crossed fast axes, so their retardances subtract.
struct CompositeWaveplate {
  double t_mgf2_mm = 0.0;
  double t_quartz_mm = 0.0;
};

}  // namespace pairgen
