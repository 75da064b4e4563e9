#pragma once

#include <array>
#include <string>
#include <vector>

#include "llb/mesh.hpp"
#include "llb/params.hpp"

namespace llb {

/// One of the six reference simulations: domain, coefficients, final time, step count and
/// initial data as component expressions in x, y, z.
struct Preset {
  std::string name;
  DomainTag domain = DomainTag::unit_square;
  int n = 1;  // default subdivisions per unit length
  SchemeParams params;
  TimeGrid time;
  std::array<std::string, 3> u0;
};

/// Throws std::invalid_argument for unknown names (valid: sim1 .. sim6).
const Preset& find_preset(const std::string& name);
const std::vector<Preset>& all_presets();

}  // namespace llb
