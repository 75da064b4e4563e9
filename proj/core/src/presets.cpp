#include "llb/presets.hpp"

#include <stdexcept>

namespace llb {

const std::vector<Preset>& all_presets() {
  static const std::vector<Preset> presets = [] {
    const SchemeParams convex{5.0, 2.0, 50.0, 1.0, 1e-3};
    const SchemeParams corner{0.5, 2.0, 50.0, 1.0, 1e-3};
    const SchemeParams slow{0.02, 0.04, 0.05, 0.5, 1e-3};
    SchemeParams convex_llb = convex;
    convex_llb.epsilon = 0.0;
    const TimeGrid grid{0.5, 200};  // k = 2.5e-3
    const std::array<std::string, 3> square_u0{"cos(2*pi*x)", "sin(2*pi*y)", "2*cos(2*pi*x)*sin(2*pi*y)"};
    return std::vector<Preset>{
        {"sim1", DomainTag::unit_square, 32, convex, grid, square_u0},
        {"sim2", DomainTag::unit_cube, 8, convex, grid, {"2*cos(2*pi*x)", "sin(2*pi*y)", "2*cos(2*pi*y)*sin(2*pi*z)"}},
        {"sim3", DomainTag::unit_square, 125, slow, grid,
         {"2*sin(pi*x)^2*sin(pi*y)^2", "4*sin(2*pi*x)^2*sin(pi*y)^2", "8*sin(pi*x)^2*sin(2*pi*y)^2"}},
        {"sim4", DomainTag::unit_square, 32, convex_llb, grid, square_u0},
        {"sim5", DomainTag::l_shape, 16, corner, grid, {"2*x^2", "2*y", "x^2-2*y^2"}},
        {"sim6", DomainTag::fichera, 4, corner, grid, {"2*x^2", "2*z", "x^2-2*y^2"}},
    };
  }();
  return presets;
}

const Preset& find_preset(const std::string& name) {
  for (const Preset& p : all_presets())
    if (p.name == name) return p;
  throw std::invalid_argument("unknown preset '" + name + "' (expected sim1 .. sim6)");
}

}  // namespace llb
