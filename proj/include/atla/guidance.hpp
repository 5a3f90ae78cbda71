#pragma once

#include <utility>
#include <vector>

#include "atla/simcore.hpp"

namespace atla {

struct PointMass {
  double V = 0.0;      // m/s
  double gamma = 0.0;  // rad
  double d = 0.0;      // m, horizontal position
  double h = 0.0;      // m, altitude
  double mass = 1.0;   // kg
};

struct LosState {
  double R;     // m
  double beta;  // rad
};

// Piecewise-constant thrust: value of the last breakpoint at or before t,
// zero before the first breakpoint.
struct ThrustProfile {
  std::vector<std::pair<double, double>> breakpoints;  // (t_start s, value N)

  double at(double t) const;
  void validate() const;
  static ThrustProfile constant(double value);
};

struct EvaderProfile {
  enum class Kind { Ballistic, Straight, Weave };
  Kind kind = Kind::Straight;
  double weave_amp = 0.0;   // m/s^2
  double weave_freq = 0.0;  // rad/s
};

LosState los_state(double d_p, double h_p, double d_e, double h_e);

double los_rate(const LosState& los, double V_p, double gamma_p, double V_e,
                double gamma_e);

// n_z command from proportional navigation; lambda_pn = 1 reduces to the
// plain substitution of the LOS rate into the turn dynamics.
double pn_accel_command(double lambda_pn, const LosState& los, double V_p,
                        double gamma_p, double V_e, double gamma_e);

PointMass point_mass_derivative(const PointMass& pm, double thrust,
                                double drag, double n_z);

double evader_accel(const EvaderProfile& profile, double t,
                    const PointMass& pm);

enum class PursuerKind { Ideal, Ftla, Atla };

struct EngagementSetup {
  // Pursuer initial condition (speeds given as Mach at the given altitude).
  double p_mach = 0.5;
  double p_gamma = 0.0;  // rad
  double p_h = 3000.0;   // m
  double p_d = 0.0;      // m

  // Evader initial condition.
  double e_mach = 0.85;
  double e_gamma = 0.2617993877991494;  // rad (15 deg)
  double e_h = 4000.0;                  // m
  double e_d = 1000.0;                  // m

  EvaderProfile evader;
  bool evader_const_speed = false;

  ThrustProfile thrust{{{0.0, 15000.0}, {10.0, 2000.0}, {20.0, 0.0}}};
  double lambda_pn = 4.0;
  double ideal_drag = 0.0;            // N, ideal-pursuer drag hook
  double intercept_threshold = 5.0;   // m, reporting only
};

struct EngagementResult {
  Trajectory trajectory;
  double miss_distance = 0.0;  // m
  double flight_time = 0.0;    // s
  bool terminated = false;     // closest approach reached before t_final
  bool intercepted = false;    // terminated && miss below threshold
};

// Joint pursuer/evader simulation. The missile variants fly the full
// airframe under the autopilot with the PN command as a_z_ref; the ideal
// pursuer realizes the command instantaneously. Terminates at the first
// local minimum of range (bisection-refined) or at t_final, in which case
// the miss is the range at t_final.
EngagementResult run_engagement(PursuerKind kind, const EngagementSetup& es,
                                const MissileParams& params,
                                const ControllerConfig& ctrl,
                                const LoopConfig& loop,
                                const IntegratorConfig& icfg);

}  // namespace atla
