#include "atla/simcore.hpp"

#include <algorithm>
#include <cmath>

namespace atla {

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                 a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33,
                 a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                 b5 = -2187.0 / 6784, b6 = 11.0 / 84;
// Difference between the 5th- and 4th-order weights.
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

struct Stepper {
  const DerivFn& fn;
  int n;
  Eigen::VectorXd k1, k2, k3, k4, k5, k6, k7, tmp;

  Stepper(const DerivFn& f, int dim) : fn(f), n(dim) {
    k1.resize(n);
    k2.resize(n);
    k3.resize(n);
    k4.resize(n);
    k5.resize(n);
    k6.resize(n);
    k7.resize(n);
    tmp.resize(n);
  }

  void eval(double t, const Eigen::VectorXd& y, Eigen::VectorXd& dy) {
    fn(t, y, dy);
    if (!dy.allFinite())
      throw NumericError("integrate: non-finite derivative at t=" +
                         std::to_string(t));
  }

  // One trial step from (t, y); on return y_new holds the 5th-order result
  // and err_new the embedded error estimate. k1 must hold f(t, y).
  void step(double t, double h, const Eigen::VectorXd& y,
            Eigen::VectorXd& y_new, Eigen::VectorXd& err_new) {
    tmp = y + h * a21 * k1;
    eval(t + c2 * h, tmp, k2);
    tmp = y + h * (a31 * k1 + a32 * k2);
    eval(t + c3 * h, tmp, k3);
    tmp = y + h * (a41 * k1 + a42 * k2 + a43 * k3);
    eval(t + c4 * h, tmp, k4);
    tmp = y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4);
    eval(t + c5 * h, tmp, k5);
    tmp = y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5);
    eval(t + h, tmp, k6);
    y_new = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
    eval(t + h, y_new, k7);
    err_new =
        h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
  }
};

}  // namespace

void IntegratorConfig::validate() const {
  if (!(rel_tol > 0.0) || !(abs_tol > 0.0))
    throw std::invalid_argument("integrator: tolerances must be positive");
  if (!(min_step > 0.0))
    throw std::invalid_argument("integrator: min_step must be positive");
  if (max_step != 0.0 && max_step < min_step)
    throw std::invalid_argument("integrator: max_step below min_step");
}

void LoopConfig::validate() const {
  if (!(t_s > 0.0)) throw std::invalid_argument("loop: t_s must be positive");
  if (!(t_final >= t_s))
    throw std::invalid_argument("loop: t_final must be at least t_s");
}

Eigen::VectorXd integrate_interval(const DerivFn& fn, Eigen::VectorXd y,
                                   double t0, double t1,
                                   const IntegratorConfig& cfg) {
  cfg.validate();
  if (!(t1 > t0))
    throw std::invalid_argument("integrate: t1 must exceed t0");

  const int n = static_cast<int>(y.size());
  Stepper st(fn, n);
  Eigen::VectorXd y_new(n), err(n);

  double t = t0;
  const double span = t1 - t0;
  const double h_cap = cfg.max_step > 0.0 ? std::min(cfg.max_step, span) : span;
  double h = std::min(h_cap, span / 10.0);
  const double t_eps = 1e-14 * std::max(1.0, std::abs(t1));
  bool rejected = false;

  st.eval(t, y, st.k1);
  while (t1 - t > t_eps) {
    const double h_try = std::min(h, t1 - t);
    st.step(t, h_try, y, y_new, err);

    double err_norm = 0.0;
    for (int i = 0; i < n; ++i) {
      const double sc =
          cfg.abs_tol +
          cfg.rel_tol * std::max(std::abs(y[i]), std::abs(y_new[i]));
      const double r = err[i] / sc;
      err_norm += r * r;
    }
    err_norm = std::sqrt(err_norm / n);

    if (err_norm <= 1.0) {
      t += h_try;
      y.swap(y_new);
      st.k1.swap(st.k7);  // FSAL
      const double grow = rejected ? 1.0 : 5.0;
      const double fac =
          err_norm == 0.0
              ? grow
              : std::clamp(0.9 * std::pow(err_norm, -0.2), 0.2, grow);
      h = std::min(h_try * fac, h_cap);
      rejected = false;
    } else {
      h = h_try * std::max(0.2, 0.9 * std::pow(err_norm, -0.2));
      rejected = true;
      if (h < cfg.min_step)
        throw StiffnessError("integrate: step underflow at t=" +
                             std::to_string(t));
    }
  }
  return y;
}

Eigen::VectorXd integrate_fixed(const DerivFn& fn, Eigen::VectorXd y,
                                double t0, double t1, int n_steps) {
  if (n_steps < 1)
    throw std::invalid_argument("integrate_fixed: n_steps must be >= 1");
  const int n = static_cast<int>(y.size());
  Stepper st(fn, n);
  Eigen::VectorXd y_new(n), err(n);
  const double h = (t1 - t0) / n_steps;
  for (int i = 0; i < n_steps; ++i) {
    const double t = t0 + i * h;
    st.eval(t, y, st.k1);
    st.step(t, h, y, y_new, err);
    y.swap(y_new);
  }
  return y;
}

double Trajectory::mean_abs_z() const {
  if (records.empty()) return 0.0;
  double s = 0.0;
  for (const auto& r : records) s += std::abs(r.z);
  return s / static_cast<double>(records.size());
}

double Trajectory::max_abs_qdot() const {
  double m = 0.0;
  for (const auto& r : records) m = std::max(m, std::abs(r.qdot));
  return m;
}

Trajectory run_closed_loop(const PlantHooks& plant,
                           const ControllerConfig& ctrl,
                           const LoopConfig& loop,
                           const IntegratorConfig& icfg) {
  loop.validate();
  icfg.validate();
  if (!plant.deriv || !plant.imu || !plant.a_z_ref || !plant.fill)
    throw std::invalid_argument("run_closed_loop: missing plant hooks");
  if (ctrl.adaptive && !plant.linearize)
    throw std::invalid_argument(
        "run_closed_loop: adaptive control requires a linearize hook");

  const int n = plant.dim;
  const TlaGains& g = ctrl.gains;

  Eigen::VectorXd y(n + 1);  // plant states plus the autopilot integral
  y.head(n) = plant.y0;
  y[n] = 0.0;

  RcacController rcac(ctrl.rcac);
  FirFilter gf;
  bool have_gf = false;
  double u_a = 0.0;

  auto clamp_u = [&](double u) {
    if (ctrl.u_clamp > 0.0) return std::clamp(u, -ctrl.u_clamp, ctrl.u_clamp);
    return u;
  };

  // u_a is held over each interval; the autopilot path is continuous.
  auto aug_deriv = [&](double t, const Eigen::VectorXd& ya,
                       Eigen::VectorXd& dy) {
    const auto yp = ya.head(n);
    const ImuOutput imu = plant.imu(t, yp);
    const double ref = plant.a_z_ref(t, yp);
    const double u_tla = g.K_q * imu.q + ya[n];
    const double u = clamp_u(u_tla + u_a);
    Eigen::VectorXd dyp(n);
    plant.deriv(t, yp, u, dyp);
    dy.head(n) = dyp;
    dy[n] = tla_integrand(g, imu.q, imu.a_z, ref);
  };

  const int n_steps =
      std::max<int>(1, static_cast<int>(std::llround(loop.t_final / loop.t_s)));

  Trajectory traj;
  traj.records.reserve(n_steps + 2);

  auto make_record = [&](double t, const Eigen::VectorXd& ya) {
    TrajectoryRecord rec;
    rec.t = t;
    plant.fill(t, ya.head(n), rec);
    const ImuOutput imu = plant.imu(t, ya.head(n));
    const double ref = plant.a_z_ref(t, ya.head(n));
    rec.a_z = imu.a_z;
    rec.a_z_ref = ref;
    rec.z = ctrl.z_tap == ZTap::ReferenceMinusAz ? ref - imu.a_z
                                                 : ref - g.K_az * imu.a_z;
    rec.u_tla = g.K_q * imu.q + ya[n];
    rec.u_a = u_a;
    rec.u = clamp_u(rec.u_tla + u_a);
    rec.theta_k = ctrl.adaptive
                      ? rcac.state().theta
                      : Eigen::VectorXd::Zero(ctrl.rcac.dim());
    return rec;
  };

  double prev_event = 0.0;
  bool have_event = false;
  if (plant.event) {
    prev_event = plant.event(0.0, y.head(n));
    have_event = true;
  }

  for (int k = 0; k <= n_steps; ++k) {
    const double t_k = k * loop.t_s;

    if (k < n_steps) {
      const ImuOutput imu = plant.imu(t_k, y.head(n));
      const double ref = plant.a_z_ref(t_k, y.head(n));
      const double z_k = ctrl.z_tap == ZTap::ReferenceMinusAz
                             ? ref - imu.a_z
                             : ref - g.K_az * imu.a_z;
      if (ctrl.adaptive) {
        const double u_now = clamp_u(g.K_q * imu.q + y[n] + u_a);
        try {
          const LinearModel model = plant.linearize(t_k, y.head(n), u_now);
          gf = build_gf(transmission_zeros(model), model, loop.t_s,
                        ctrl.gf_complex_pairs);
          have_gf = true;
        } catch (const std::exception&) {
          if (!have_gf) throw;  // transient failures fall back to the cache
        }
        u_a = rcac.step(z_k, gf);
      }
    }

    traj.records.push_back(make_record(t_k, y));
    if (k == n_steps) break;

    const Eigen::VectorXd y_start = y;
    const double t_next = t_k + loop.t_s;
    y = integrate_interval(aug_deriv, y, t_k, t_next, icfg);

    if (have_event) {
      const double e_now = plant.event(t_next, y.head(n));
      if (prev_event < 0.0 && e_now >= 0.0) {
        // Bisection on the event time within this interval.
        double lo = t_k, hi = t_next;
        Eigen::VectorXd y_hi = y;
        while (hi - lo > 1e-4) {
          const double mid = 0.5 * (lo + hi);
          const Eigen::VectorXd y_mid =
              integrate_interval(aug_deriv, y_start, t_k, mid, icfg);
          if (plant.event(mid, y_mid.head(n)) < 0.0) {
            lo = mid;
          } else {
            hi = mid;
            y_hi = y_mid;
          }
        }
        traj.records.push_back(make_record(hi, y_hi));
        traj.event_stop = true;
        traj.event_time = hi;
        return traj;
      }
      prev_event = e_now;
    }
  }
  return traj;
}

PlantHooks make_missile_plant(const MissileParams& params,
                              const MissileState& initial,
                              std::function<double(double)> thrust,
                              std::function<double(double)> command) {
  PlantHooks hooks;
  hooks.dim = 8;
  hooks.y0.resize(8);
  hooks.y0 << initial.mach, initial.gamma, initial.theta, initial.q,
      initial.h, initial.X, initial.delta, initial.delta_dot;

  auto unpack = [](const Eigen::VectorXd& y) {
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

  hooks.deriv = [params, thrust, unpack](double t, const Eigen::VectorXd& y,
                                         double u, Eigen::VectorXd& dy) {
    const MissileState d = state_derivative(unpack(y), thrust(t), u, params);
    dy.resize(8);
    dy << d.mach, d.gamma, d.theta, d.q, d.h, d.X, d.delta, d.delta_dot;
  };
  hooks.imu = [params, unpack](double, const Eigen::VectorXd& y) {
    return imu_outputs(unpack(y), params);
  };
  hooks.a_z_ref = [command](double t, const Eigen::VectorXd&) {
    return command(t);
  };
  hooks.fill = [params, unpack](double, const Eigen::VectorXd& y,
                                TrajectoryRecord& rec) {
    const MissileState s = unpack(y);
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
  };
  hooks.linearize = [params, thrust, unpack](double t,
                                             const Eigen::VectorXd& y,
                                             double u) {
    return linearize_missile(unpack(y), thrust(t), u, params);
  };
  return hooks;
}

}  // namespace atla
