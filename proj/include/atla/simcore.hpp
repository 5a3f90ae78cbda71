#pragma once

#include <Eigen/Dense>
#include <functional>
#include <optional>
#include <stdexcept>
#include <vector>

#include "atla/airframe.hpp"
#include "atla/autopilot.hpp"
#include "atla/linearize.hpp"
#include "atla/rcac.hpp"

namespace atla {

struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct StiffnessError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct IntegratorConfig {
  double rel_tol = 1e-8;
  double abs_tol = 1e-9;
  double min_step = 1e-12;  // s; falling below raises StiffnessError
  double max_step = 0.0;    // s; 0 means limited only by the interval

  void validate() const;
};

using DerivFn = std::function<void(double t, const Eigen::VectorXd& y,
                                   Eigen::VectorXd& dy)>;

// Adaptive Dormand-Prince 5(4). Any exogenous inputs must be captured in fn
// and held constant over [t0, t1] by the caller.
Eigen::VectorXd integrate_interval(const DerivFn& fn, Eigen::VectorXd y,
                                   double t0, double t1,
                                   const IntegratorConfig& cfg);

// Same tableau with n equal steps and no error control; used by
// order-of-accuracy checks.
Eigen::VectorXd integrate_fixed(const DerivFn& fn, Eigen::VectorXd y,
                                double t0, double t1, int n_steps);

struct LoopConfig {
  double t_s = 0.005;    // controller timestep, s
  double t_final = 10.0;  // s

  void validate() const;
};

struct TrajectoryRecord {
  double t = 0.0;
  // Vehicle columns.
  double mach = 0.0, V = 0.0, gamma = 0.0, theta = 0.0, q = 0.0, alpha = 0.0,
         h = 0.0, X = 0.0, delta = 0.0;
  // Control columns.
  double u = 0.0, u_tla = 0.0, u_a = 0.0;
  // Performance columns.
  double a_z_ref = 0.0, a_z = 0.0, z = 0.0;
  double qdot = 0.0;  // pitch acceleration sample (not serialized)
  Eigen::VectorXd theta_k;
  // Engagement columns, present when engaging.
  bool engaging = false;
  double R = 0.0, beta = 0.0, evader_d = 0.0, evader_h = 0.0;
};

struct Trajectory {
  std::vector<TrajectoryRecord> records;
  bool event_stop = false;   // terminated by the event crossing
  double event_time = 0.0;

  double mean_abs_z() const;
  double max_abs_qdot() const;
};

// Which measurement combination feeds the adaptive controller's error input.
enum class ZTap {
  ReferenceMinusAz,     // a_z_ref - a_z
  ReferenceMinusKazAz,  // a_z_ref - K_az a_z
};

struct ControllerConfig {
  TlaGains gains;          // pass pre-scaled gains for degraded runs
  bool adaptive = false;
  RcacConfig rcac;
  ZTap z_tap = ZTap::ReferenceMinusAz;
  double u_clamp = 0.0;    // rad; symmetric fin-command limit, 0 disables
  bool gf_complex_pairs = false;  // admit complex RHP zero pairs into G_f
};

// World the loop drives: plant states plus measurement, command, logging,
// and optional event/linearization hooks.
struct PlantHooks {
  int dim = 0;
  Eigen::VectorXd y0;
  // dy/dt of the plant states under total fin command u.
  std::function<void(double t, const Eigen::VectorXd& y, double u,
                     Eigen::VectorXd& dy)>
      deriv;
  std::function<ImuOutput(double t, const Eigen::VectorXd& y)> imu;
  std::function<double(double t, const Eigen::VectorXd& y)> a_z_ref;
  // Fills the vehicle/engagement columns of a record.
  std::function<void(double t, const Eigen::VectorXd& y, TrajectoryRecord&)>
      fill;
  // Optional: loop stops at the first minus-to-plus crossing, refined by
  // bisection on the event time to 1e-4 s.
  std::function<double(double t, const Eigen::VectorXd& y)> event;
  // Required when adaptive: linear model for the retrospective filter.
  std::function<LinearModel(double t, const Eigen::VectorXd& y, double u)>
      linearize;
};

// Runs the three-loop autopilot (optionally with the adaptive augmentation)
// against the plant. The autopilot integral advances continuously as an
// appended state; the adaptive increment is held constant between controller
// steps. Logs one record per controller step.
Trajectory run_closed_loop(const PlantHooks& plant,
                           const ControllerConfig& ctrl,
                           const LoopConfig& loop,
                           const IntegratorConfig& icfg);

// Plant hooks for the bare missile with a time-based acceleration command.
PlantHooks make_missile_plant(const MissileParams& params,
                              const MissileState& initial,
                              std::function<double(double)> thrust,
                              std::function<double(double)> command);

}  // namespace atla
