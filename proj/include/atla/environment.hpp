#pragma once

namespace atla {

// Standard gravity, used everywhere a single g appears in the dynamics.
inline constexpr double kGravity = 9.80665;  // m/s^2

namespace isa {
inline constexpr double kSeaLevelTemperature = 288.15;  // K
inline constexpr double kSeaLevelDensity = 1.225;       // kg/m^3
inline constexpr double kLapseRate = 0.0065;            // K/m
inline constexpr double kGasConstantAir = 287.053;      // J/(kg K)
inline constexpr double kGammaAir = 1.4;
inline constexpr double kMaxAltitude = 11000.0;         // m, top of the modeled troposphere
}  // namespace isa

struct AtmosphereState {
  double density;         // kg/m^3
  double speed_of_sound;  // m/s
  double temperature;     // K
};

// International Standard Atmosphere, troposphere segment only.
// Throws std::domain_error for altitudes outside [0, 11000] m.
AtmosphereState isa_at(double altitude_m);

}  // namespace atla
