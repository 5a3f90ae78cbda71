#include "atla/guidance.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace atla {

namespace {

constexpr double kRangeFloor = 1e-9;  // m, guards rate division at contact

struct RelativeState {
  double dd, dh;  // evader minus pursuer
  double R;
  double rdot;
};

RelativeState relative_state(double d_p, double h_p, double vx_p, double vh_p,
                             double d_e, double h_e, double vx_e,
                             double vh_e) {
  RelativeState r;
  r.dd = d_e - d_p;
  r.dh = h_e - h_p;
  r.R = std::hypot(r.dd, r.dh);
  r.rdot =
      (r.dd * (vx_e - vx_p) + r.dh * (vh_e - vh_p)) / std::max(r.R, kRangeFloor);
  return r;
}

}  // namespace

double ThrustProfile::at(double t) const {
  double value = 0.0;
  for (const auto& [t_start, v] : breakpoints) {
    if (t_start <= t) value = v;
  }
  return value;
}

void ThrustProfile::validate() const {
  double prev = -std::numeric_limits<double>::infinity();
  for (const auto& [t_start, v] : breakpoints) {
    if (!(t_start > prev))
      throw std::invalid_argument(
          "thrust profile: breakpoints must be strictly increasing in time");
    if (v < 0.0)
      throw std::invalid_argument("thrust profile: values must be >= 0");
    prev = t_start;
  }
}

ThrustProfile ThrustProfile::constant(double value) {
  return ThrustProfile{{{0.0, value}}};
}

LosState los_state(double d_p, double h_p, double d_e, double h_e) {
  const double dd = d_e - d_p;
  const double dh = h_e - h_p;
  return {std::hypot(dd, dh), std::atan2(dh, dd)};
}

double los_rate(const LosState& los, double V_p, double gamma_p, double V_e,
                double gamma_e) {
  return (V_p * std::sin(los.beta - gamma_p) -
          V_e * std::sin(los.beta - gamma_e)) /
         std::max(los.R, kRangeFloor);
}

double pn_accel_command(double lambda_pn, const LosState& los, double V_p,
                        double gamma_p, double V_e, double gamma_e) {
  const double beta_dot = los_rate(los, V_p, gamma_p, V_e, gamma_e);
  return -lambda_pn * V_p * beta_dot - kGravity * std::cos(gamma_p);
}

PointMass point_mass_derivative(const PointMass& pm, double thrust,
                                double drag, double n_z) {
  if (!(pm.V > 0.0))
    throw std::runtime_error("point mass: speed reached zero (stall)");
  PointMass d;
  d.V = (thrust - drag) / pm.mass - kGravity * std::sin(pm.gamma);
  d.gamma = -(n_z + kGravity * std::cos(pm.gamma)) / pm.V;
  d.d = pm.V * std::cos(pm.gamma);
  d.h = pm.V * std::sin(pm.gamma);
  d.mass = 0.0;
  return d;
}

double evader_accel(const EvaderProfile& profile, double t,
                    const PointMass& pm) {
  switch (profile.kind) {
    case EvaderProfile::Kind::Ballistic:
      return 0.0;
    case EvaderProfile::Kind::Straight:
      return -kGravity * std::cos(pm.gamma);
    case EvaderProfile::Kind::Weave:
      return -kGravity * std::cos(pm.gamma) +
             profile.weave_amp * std::sin(profile.weave_freq * t);
  }
  throw std::invalid_argument("evader profile: unknown kind");
}

namespace {

// State layout for the missile pursuer:
//   [0..7]  missile (mach, gamma, theta, q, h, X, delta, delta_dot)
//   [8..11] evader  (V, gamma, d, h)
PlantHooks make_missile_engagement_plant(const EngagementSetup& es,
                                         const MissileParams& params,
                                         const MissileState& missile0,
                                         const PointMass& evader0) {
  PlantHooks hooks;
  hooks.dim = 12;
  hooks.y0.resize(12);
  hooks.y0 << missile0.mach, missile0.gamma, missile0.theta, missile0.q,
      missile0.h, missile0.X, missile0.delta, missile0.delta_dot, evader0.V,
      evader0.gamma, evader0.d, evader0.h;

  auto unpack_missile = [](const Eigen::VectorXd& y) {
    MissileState s;
    s.mach = y[0];
    s.gamma = y[1];
    s.theta = y[2];
    s.q = y[3];
    s.h = y[4];
    s.X = y[5];
    s.delta = y[6];
    s.delta_dot = y[7];
    return s;
  };
  auto unpack_evader = [](const Eigen::VectorXd& y) {
    return PointMass{y[8], y[9], y[10], y[11], 1.0};
  };

  hooks.deriv = [es, params, unpack_missile, unpack_evader](
                    double t, const Eigen::VectorXd& y, double u,
                    Eigen::VectorXd& dy) {
    const MissileState s = unpack_missile(y);
    const PointMass e = unpack_evader(y);
    const MissileState dm = state_derivative(s, es.thrust.at(t), u, params);
    const double n_z_e = evader_accel(es.evader, t, e);
    PointMass de = point_mass_derivative(e, 0.0, 0.0, n_z_e);
    if (es.evader_const_speed) de.V = 0.0;
    dy.resize(12);
    dy << dm.mach, dm.gamma, dm.theta, dm.q, dm.h, dm.X, dm.delta,
        dm.delta_dot, de.V, de.gamma, de.d, de.h;
  };
  hooks.imu = [params, unpack_missile](double, const Eigen::VectorXd& y) {
    return imu_outputs(unpack_missile(y), params);
  };
  hooks.a_z_ref = [es, unpack_missile, unpack_evader](
                      double, const Eigen::VectorXd& y) {
    const MissileState s = unpack_missile(y);
    const PointMass e = unpack_evader(y);
    const double V_p = s.mach * isa_at(s.h).speed_of_sound;
    const LosState los = los_state(s.X, s.h, e.d, e.h);
    return pn_accel_command(es.lambda_pn, los, V_p, s.gamma, e.V, e.gamma);
  };
  hooks.fill = [params, unpack_missile, unpack_evader](
                   double, const Eigen::VectorXd& y, TrajectoryRecord& rec) {
    const MissileState s = unpack_missile(y);
    const PointMass e = unpack_evader(y);
    rec.mach = s.mach;
    rec.V = s.mach * isa_at(s.h).speed_of_sound;
    rec.gamma = s.gamma;
    rec.theta = s.theta;
    rec.q = s.q;
    rec.alpha = s.alpha();
    rec.h = s.h;
    rec.X = s.X;
    rec.delta = s.delta;
    rec.qdot = pitch_accel(s, params);
    const LosState los = los_state(s.X, s.h, e.d, e.h);
    rec.engaging = true;
    rec.R = los.R;
    rec.beta = los.beta;
    rec.evader_d = e.d;
    rec.evader_h = e.h;
  };
  hooks.event = [unpack_missile, unpack_evader](double,
                                                const Eigen::VectorXd& y) {
    const MissileState s = unpack_missile(y);
    const PointMass e = unpack_evader(y);
    const double V_p = s.mach * isa_at(s.h).speed_of_sound;
    return relative_state(s.X, s.h, V_p * std::cos(s.gamma),
                          V_p * std::sin(s.gamma), e.d, e.h,
                          e.V * std::cos(e.gamma), e.V * std::sin(e.gamma))
        .rdot;
  };
  hooks.linearize = [es, params, unpack_missile](
                        double t, const Eigen::VectorXd& y, double u) {
    return linearize_missile(unpack_missile(y), es.thrust.at(t), u, params);
  };
  return hooks;
}

// State layout for the ideal pursuer:
//   [0..3] pursuer (V, gamma, d, h), [4..7] evader (V, gamma, d, h)
PlantHooks make_ideal_engagement_plant(const EngagementSetup& es,
                                       double pursuer_mass,
                                       const PointMass& pursuer0,
                                       const PointMass& evader0) {
  PlantHooks hooks;
  hooks.dim = 8;
  hooks.y0.resize(8);
  hooks.y0 << pursuer0.V, pursuer0.gamma, pursuer0.d, pursuer0.h, evader0.V,
      evader0.gamma, evader0.d, evader0.h;

  auto unpack_p = [pursuer_mass](const Eigen::VectorXd& y) {
    return PointMass{y[0], y[1], y[2], y[3], pursuer_mass};
  };
  auto unpack_e = [](const Eigen::VectorXd& y) {
    return PointMass{y[4], y[5], y[6], y[7], 1.0};
  };
  auto command = [es, unpack_p, unpack_e](double, const Eigen::VectorXd& y) {
    const PointMass p = unpack_p(y);
    const PointMass e = unpack_e(y);
    const LosState los = los_state(p.d, p.h, e.d, e.h);
    return pn_accel_command(es.lambda_pn, los, p.V, p.gamma, e.V, e.gamma);
  };

  hooks.deriv = [es, command, unpack_p, unpack_e](
                    double t, const Eigen::VectorXd& y, double,
                    Eigen::VectorXd& dy) {
    const PointMass p = unpack_p(y);
    const PointMass e = unpack_e(y);
    // Normal acceleration realized instantaneously.
    const double n_z_p = command(t, y);
    const PointMass dp =
        point_mass_derivative(p, es.thrust.at(t), es.ideal_drag, n_z_p);
    const double n_z_e = evader_accel(es.evader, t, e);
    PointMass de = point_mass_derivative(e, 0.0, 0.0, n_z_e);
    if (es.evader_const_speed) de.V = 0.0;
    dy.resize(8);
    dy << dp.V, dp.gamma, dp.d, dp.h, de.V, de.gamma, de.d, de.h;
  };
  hooks.imu = [command](double t, const Eigen::VectorXd& y) {
    // The realized acceleration equals the command; no sensor dynamics.
    return ImuOutput{command(t, y), 0.0};
  };
  hooks.a_z_ref = command;
  hooks.fill = [unpack_p, unpack_e](double, const Eigen::VectorXd& y,
                                    TrajectoryRecord& rec) {
    const PointMass p = unpack_p(y);
    const PointMass e = unpack_e(y);
    rec.V = p.V;
    rec.mach = p.h >= 0.0 && p.h <= isa::kMaxAltitude
                   ? p.V / isa_at(p.h).speed_of_sound
                   : 0.0;
    rec.gamma = p.gamma;
    rec.h = p.h;
    rec.X = p.d;
    const LosState los = los_state(p.d, p.h, e.d, e.h);
    rec.engaging = true;
    rec.R = los.R;
    rec.beta = los.beta;
    rec.evader_d = e.d;
    rec.evader_h = e.h;
  };
  hooks.event = [unpack_p, unpack_e](double, const Eigen::VectorXd& y) {
    const PointMass p = unpack_p(y);
    const PointMass e = unpack_e(y);
    return relative_state(p.d, p.h, p.V * std::cos(p.gamma),
                          p.V * std::sin(p.gamma), e.d, e.h,
                          e.V * std::cos(e.gamma), e.V * std::sin(e.gamma))
        .rdot;
  };
  return hooks;
}

}  // namespace

EngagementResult run_engagement(PursuerKind kind, const EngagementSetup& es,
                                const MissileParams& params,
                                const ControllerConfig& ctrl,
                                const LoopConfig& loop,
                                const IntegratorConfig& icfg) {
  es.thrust.validate();

  const PointMass evader0{es.e_mach * isa_at(es.e_h).speed_of_sound,
                          es.e_gamma, es.e_d, es.e_h, 1.0};

  // Coincident start is an immediate interception, not an error.
  if (es.p_d == es.e_d && es.p_h == es.e_h) {
    EngagementResult r;
    r.miss_distance = 0.0;
    r.flight_time = 0.0;
    r.terminated = true;
    r.intercepted = true;
    return r;
  }

  PlantHooks hooks;
  ControllerConfig loop_ctrl = ctrl;
  if (kind == PursuerKind::Ideal) {
    const PointMass pursuer0{es.p_mach * isa_at(es.p_h).speed_of_sound,
                             es.p_gamma, es.p_d, es.p_h, params.mass};
    hooks = make_ideal_engagement_plant(es, params.mass, pursuer0, evader0);
    loop_ctrl = ControllerConfig{};      // no autopilot in the loop
    loop_ctrl.gains = TlaGains{0, 0, 0, 0};
    loop_ctrl.adaptive = false;
  } else {
    MissileState missile0;
    missile0.mach = es.p_mach;
    missile0.gamma = es.p_gamma;
    missile0.theta = es.p_gamma;  // zero initial angle of attack
    missile0.q = 0.0;
    missile0.h = es.p_h;
    missile0.X = es.p_d;
    missile0.delta = 0.0;
    missile0.delta_dot = 0.0;
    hooks = make_missile_engagement_plant(es, params, missile0, evader0);
    loop_ctrl.adaptive = (kind == PursuerKind::Atla);
  }

  EngagementResult r;
  r.trajectory = run_closed_loop(hooks, loop_ctrl, loop, icfg);

  const TrajectoryRecord& last = r.trajectory.records.back();
  r.terminated = r.trajectory.event_stop;
  r.flight_time = r.terminated ? r.trajectory.event_time : loop.t_final;
  r.miss_distance = last.R;
  // The refined closest approach can never exceed any sampled range.
  for (const auto& rec : r.trajectory.records)
    r.miss_distance = std::min(r.miss_distance, rec.R);
  r.intercepted = r.terminated && r.miss_distance < es.intercept_threshold;
  return r;
}

}  // namespace atla
