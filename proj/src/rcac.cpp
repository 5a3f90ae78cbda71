#include "atla/rcac.hpp"

#include <stdexcept>
#include <string>

namespace atla {

namespace {

constexpr int kHistoryMargin = 16;  // keeps delay lines longer than any filter

int history_capacity(const RcacConfig& cfg) {
  return cfg.n_c + kHistoryMargin;
}

template <typename Deque, typename Value>
void push_trimmed(Deque& d, Value&& v, int cap) {
  d.push_front(std::forward<Value>(v));
  while (static_cast<int>(d.size()) > cap) d.pop_back();
}

}  // namespace

void RcacConfig::validate() const {
  if (n_c < 1) throw std::invalid_argument("rcac: n_c must be >= 1");
  if (R_z < 0.0 || R_u < 0.0)
    throw std::invalid_argument("rcac: R_z and R_u must be nonnegative");
  if (!(R_theta > 0.0))
    throw std::invalid_argument("rcac: R_theta must be positive");
  if (!(lambda > 0.0 && lambda <= 1.0))
    throw std::invalid_argument("rcac: lambda must be in (0, 1]");
  if (theta_0.size() != 0 && theta_0.size() != dim())
    throw std::invalid_argument("rcac: theta_0 must have 2 n_c + 1 entries");
}

RcacState make_rcac_state(const RcacConfig& cfg) {
  cfg.validate();
  RcacState s;
  s.theta = cfg.theta_0.size() ? cfg.theta_0
                               : Eigen::VectorXd::Zero(cfg.dim());
  s.P = Eigen::MatrixXd::Identity(cfg.dim(), cfg.dim()) / cfg.R_theta;
  s.gamma = 0.0;
  return s;
}

Eigen::VectorXd build_regressor(const RcacState& s, const RcacConfig& cfg) {
  Eigen::VectorXd phi = Eigen::VectorXd::Zero(cfg.dim());
  for (int i = 0; i < cfg.n_c; ++i) {
    if (i < static_cast<int>(s.u_hist.size())) phi[i] = s.u_hist[i];
    if (i < static_cast<int>(s.z_hist.size()))
      phi[cfg.n_c + i] = s.z_hist[i];
  }
  phi[2 * cfg.n_c] = s.gamma;
  return phi;
}

RcacUpdateResult rcac_update(RcacState& s, const RcacConfig& cfg, double z_k,
                             const FirFilter& gf) {
  const int n = cfg.dim();

  // The accumulated error includes the current sample.
  s.gamma += z_k;
  const Eigen::VectorXd phi = build_regressor(s, cfg);
  const Eigen::VectorXd phi_f = filter_signal(gf, s.phi_hist, n);
  const double u_f = filter_signal(gf, s.u_hist);

  // Stack the weighted rows; zero-weight rows contribute nothing and would
  // make the R inverse in the covariance update singular.
  int rows = 0;
  Eigen::MatrixXd Phi(2, n);
  Eigen::Vector2d y;
  Eigen::Vector2d w;
  if (cfg.R_z > 0.0) {
    Phi.row(rows) = phi_f.transpose();
    y[rows] = u_f - z_k;
    w[rows] = cfg.R_z;
    ++rows;
  }
  if (cfg.R_u > 0.0) {
    Phi.row(rows) = phi.transpose();
    y[rows] = 0.0;
    w[rows] = cfg.R_u;
    ++rows;
  }

  if (rows > 0) {
    const Eigen::MatrixXd Phir = Phi.topRows(rows);
    const Eigen::VectorXd yr = y.head(rows);
    const Eigen::MatrixXd Rw = w.head(rows).asDiagonal();
    const Eigen::MatrixXd Rw_inv =
        w.head(rows).cwiseInverse().asDiagonal();

    const Eigen::MatrixXd S =
        cfg.lambda * Rw_inv + Phir * s.P * Phir.transpose();
    const Eigen::MatrixXd PPhiT = s.P * Phir.transpose();
    s.P = (s.P - PPhiT * S.ldlt().solve(PPhiT.transpose())) / cfg.lambda;
    s.P = 0.5 * (s.P + s.P.transpose().eval());
    s.theta -= s.P * Phir.transpose() * Rw * (Phir * s.theta - yr);
  }

  if (!s.theta.allFinite())
    throw std::runtime_error("rcac: non-finite gain vector theta");
  if (!s.P.allFinite())
    throw std::runtime_error("rcac: non-finite covariance P");
  const Eigen::VectorXd diag = s.P.diagonal();
  if ((diag.array() < -1e-12 * s.P.norm()).any())
    throw std::runtime_error("rcac: covariance lost positive definiteness");

  const double u_k = phi.dot(s.theta);
  if (!std::isfinite(u_k))
    throw std::runtime_error("rcac: non-finite control u_k");

  const int cap = history_capacity(cfg);
  push_trimmed(s.u_hist, u_k, cap);
  push_trimmed(s.z_hist, z_k, cap);
  push_trimmed(s.phi_hist, phi, cap);

  return {u_k, {phi, phi_f, u_f, z_k}};
}

double batch_cost(const std::vector<RcacSample>& history,
                  const Eigen::VectorXd& theta_hat, const RcacConfig& cfg) {
  const int k = static_cast<int>(history.size());
  double J = 0.0;
  for (int i = 0; i < k; ++i) {
    const RcacSample& smp = history[i];
    const double zhat = smp.z + smp.phi_f.dot(theta_hat) - smp.u_f;
    const double u_pred = smp.phi.dot(theta_hat);
    J += std::pow(cfg.lambda, k - 1 - i) *
         (cfg.R_z * zhat * zhat + cfg.R_u * u_pred * u_pred);
  }
  const Eigen::VectorXd dtheta =
      theta_hat - (cfg.theta_0.size() ? cfg.theta_0
                                      : Eigen::VectorXd::Zero(cfg.dim()));
  J += std::pow(cfg.lambda, k) * cfg.R_theta * dtheta.squaredNorm();
  return J;
}

Eigen::VectorXd batch_minimizer(const std::vector<RcacSample>& history,
                                const RcacConfig& cfg) {
  const int n = cfg.dim();
  const int k = static_cast<int>(history.size());
  const Eigen::VectorXd theta0 =
      cfg.theta_0.size() ? cfg.theta_0 : Eigen::VectorXd::Zero(n);

  Eigen::MatrixXd H = std::pow(cfg.lambda, k) * cfg.R_theta *
                      Eigen::MatrixXd::Identity(n, n);
  Eigen::VectorXd b = std::pow(cfg.lambda, k) * cfg.R_theta * theta0;
  for (int i = 0; i < k; ++i) {
    const RcacSample& smp = history[i];
    const double wi = std::pow(cfg.lambda, k - 1 - i);
    H += wi * (cfg.R_z * smp.phi_f * smp.phi_f.transpose() +
               cfg.R_u * smp.phi * smp.phi.transpose());
    b += wi * cfg.R_z * smp.phi_f * (smp.u_f - smp.z);
  }
  return H.ldlt().solve(b);
}

RcacController::RcacController(const RcacConfig& cfg)
    : cfg_(cfg), state_(make_rcac_state(cfg)) {}

double RcacController::step(double z_k, const FirFilter& gf) {
  RcacUpdateResult r = rcac_update(state_, cfg_, z_k, gf);
  last_ = r.sample;
  return r.u;
}

}  // namespace atla
