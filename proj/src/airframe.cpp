#include "atla/airframe.hpp"

#include <cmath>

namespace atla {

AeroCoeffs aero_coeffs(const FlightCondition& cond, double delta, double q,
                       const MissileParams& p) {
  const double al = cond.alpha;
  const double M = cond.mach;
  const double al3 = al * al * al;
  const double al_abs = al * std::abs(al);
  AeroCoeffs c;
  c.C_N = p.a_N * al3 + p.b_N * al_abs + p.c_N * (2.0 - M / 3.0) * al +
          p.d_N * delta;
  c.C_A = p.a_A;
  c.C_M = p.a_M * al3 + p.b_M * al_abs + p.c_M * (8.0 * M / 3.0 - 7.0) * al +
          p.d_M * delta + p.e_M * q;
  return c;
}

AeroLoads aero_loads(const AeroCoeffs& c, double dyn_pressure,
                     const MissileParams& p) {
  AeroLoads l;
  l.f_n = dyn_pressure * p.ref_area * c.C_N;
  l.f_a = dyn_pressure * p.ref_area * c.C_A;
  l.moment = dyn_pressure * p.ref_area * p.chord * c.C_M;
  return l;
}

double pitch_accel(const MissileState& s, const MissileParams& p) {
  const AtmosphereState atm = isa_at(s.h);
  const double V = s.mach * atm.speed_of_sound;
  const FlightCondition cond{s.alpha(), s.mach,
                             0.5 * atm.density * V * V};
  const AeroCoeffs c = aero_coeffs(cond, s.delta, s.q, p);
  return atm.density * atm.speed_of_sound * atm.speed_of_sound * s.mach *
         s.mach * p.ref_area * p.chord * c.C_M / (2.0 * p.inertia);
}

MissileState state_derivative(const MissileState& s, double thrust,
                              double fin_cmd, const MissileParams& p) {
  const AtmosphereState atm = isa_at(s.h);
  const double a = atm.speed_of_sound;
  const double rho = atm.density;
  const double M = s.mach;
  const double al = s.alpha();
  const double V = M * a;
  const FlightCondition cond{al, M, 0.5 * rho * V * V};
  const AeroCoeffs c = aero_coeffs(cond, s.delta, s.q, p);

  const double sin_a = std::sin(al);
  const double cos_a = std::cos(al);
  const double sin_g = std::sin(s.gamma);
  const double cos_g = std::cos(s.gamma);

  MissileState d;
  d.mach = thrust * cos_a / (p.mass * a) - kGravity * sin_g / a -
           rho * a * M * M * p.ref_area / (2.0 * p.mass) *
               (c.C_N * sin_a + c.C_A * cos_a);
  d.gamma = thrust * sin_a / (p.mass * a * M) - kGravity * cos_g / (a * M) +
            rho * a * M * p.ref_area / (2.0 * p.mass) *
                (c.C_N * cos_a - c.C_A * sin_a);
  d.theta = s.q;
  d.q = rho * a * a * M * M * p.ref_area * p.chord * c.C_M / (2.0 * p.inertia);
  d.h = M * a * sin_g;
  d.X = M * a * cos_g;
  d.delta = s.delta_dot;
  d.delta_dot = p.omega_a * p.omega_a * (fin_cmd - s.delta) -
                2.0 * p.zeta * p.omega_a * s.delta_dot;
  return d;
}

ImuOutput imu_outputs(const MissileState& s, const MissileParams& p) {
  const AtmosphereState atm = isa_at(s.h);
  const double V = s.mach * atm.speed_of_sound;
  const FlightCondition cond{s.alpha(), s.mach, 0.5 * atm.density * V * V};
  const AeroCoeffs c = aero_coeffs(cond, s.delta, s.q, p);
  const double a_z_cg = atm.density * atm.speed_of_sound *
                        atm.speed_of_sound * s.mach * s.mach * p.ref_area *
                        c.C_N / (2.0 * p.mass);
  const double qdot = pitch_accel(s, p);
  return {a_z_cg - qdot * p.d_imu, s.q};
}

}  // namespace atla
