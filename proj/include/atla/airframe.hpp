#pragma once

#include "atla/environment.hpp"

namespace atla {

// Vehicle constants. Defaults are the nominal airframe used throughout.
struct MissileParams {
  double mass = 204.0227;     // kg
  double ref_area = 0.0409;   // m^2
  double chord = 0.2286;      // m
  double inertia = 247.4336;  // kg m^2, pitch axis
  double d_imu = 0.5;         // m, CG-to-IMU offset along the body axis

  // Normal-force coefficient polynomial (per rad powers).
  double a_N = -19.373;
  double b_N = 31.023;
  double c_N = 9.717;
  double d_N = 1.948;
  // Axial coefficient (constant).
  double a_A = 0.3005;
  // Pitch-moment coefficient polynomial.
  double a_M = 40.440;
  double b_M = -64.015;
  double c_M = 2.922;
  double d_M = -11.803;
  double e_M = -1.719;

  // Second-order fin actuator.
  double omega_a = 150.0;  // rad/s
  double zeta = 0.7;
};

// Longitudinal state. True airspeed is always derived as mach * a(h).
struct MissileState {
  double mach = 0.0;
  double gamma = 0.0;      // flight path angle, rad
  double theta = 0.0;      // pitch angle, rad
  double q = 0.0;          // pitch rate, rad/s
  double h = 0.0;          // altitude, m
  double X = 0.0;          // downrange, m
  double delta = 0.0;      // fin deflection, rad
  double delta_dot = 0.0;  // rad/s

  double alpha() const { return theta - gamma; }
};

struct FlightCondition {
  double alpha;         // rad
  double mach;
  double dyn_pressure;  // Pa
};

struct AeroCoeffs {
  double C_N;
  double C_A;
  double C_M;
};

struct AeroLoads {
  double f_n;     // N, normal force
  double f_a;     // N, axial force
  double moment;  // N m, pitch moment
};

struct ImuOutput {
  double a_z;  // m/s^2, sensed normal acceleration at the IMU
  double q;    // rad/s
};

AeroCoeffs aero_coeffs(const FlightCondition& cond, double delta, double q,
                       const MissileParams& p);

AeroLoads aero_loads(const AeroCoeffs& c, double dyn_pressure,
                     const MissileParams& p);

// Pitch angular acceleration at the current state.
double pitch_accel(const MissileState& s, const MissileParams& p);

// Time derivative of every state field under the given thrust and fin
// command. The actuator is realized as delta_ddot = omega_a^2 (u - delta)
// - 2 zeta omega_a delta_dot.
MissileState state_derivative(const MissileState& s, double thrust,
                              double fin_cmd, const MissileParams& p);

// a_z = a_z_CG - qdot * d_imu, q passed through.
ImuOutput imu_outputs(const MissileState& s, const MissileParams& p);

}  // namespace atla
