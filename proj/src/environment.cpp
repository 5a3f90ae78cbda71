#include "atla/environment.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace atla {

AtmosphereState isa_at(double altitude_m) {
  if (!(altitude_m >= 0.0 && altitude_m <= isa::kMaxAltitude)) {
    throw std::domain_error("isa_at: altitude " + std::to_string(altitude_m) +
                            " m outside modeled troposphere [0, 11000] m");
  }
  const double T = isa::kSeaLevelTemperature - isa::kLapseRate * altitude_m;
  const double exponent =
      kGravity / (isa::kLapseRate * isa::kGasConstantAir) - 1.0;
  const double rho =
      isa::kSeaLevelDensity * std::pow(T / isa::kSeaLevelTemperature, exponent);
  const double a = std::sqrt(isa::kGammaAir * isa::kGasConstantAir * T);
  return {rho, a, T};
}

}  // namespace atla
