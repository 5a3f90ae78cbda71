#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <deque>
#include <vector>

#include "atla/fir_filter.hpp"

namespace atla {

struct RcacConfig {
  int n_c = 4;              // controller order; gain vector has 2 n_c + 1 entries
  double R_z = 1.0;         // performance weight, >= 0
  double R_u = 0.25427;     // control weight, >= 0
  double R_theta = std::pow(10.0, 14.398);  // prior weight (scalar times identity), > 0
  double lambda = 1.0;      // forgetting factor in (0, 1]
  Eigen::VectorXd theta_0;  // initial gain vector; empty means zeros

  int dim() const { return 2 * n_c + 1; }
  void validate() const;
};

struct RcacState {
  Eigen::VectorXd theta;                 // adaptive gain vector
  Eigen::MatrixXd P;                     // RLS covariance, symmetric PD
  std::deque<double> u_hist;             // u_{k-1} at the front
  std::deque<double> z_hist;             // z_{k-1} at the front
  std::deque<Eigen::VectorXd> phi_hist;  // phi_{k-1} at the front
  double gamma = 0.0;                    // running sum of all z_i seen so far
};

// One recorded controller step, enough to re-evaluate the cost offline.
struct RcacSample {
  Eigen::VectorXd phi;
  Eigen::VectorXd phi_f;
  double u_f;
  double z;
};

// phi_k = [u_{k-1} ... u_{k-n_c}, z_{k-1} ... z_{k-n_c}, gamma_k]; missing
// history entries read as zero.
Eigen::VectorXd build_regressor(const RcacState& s, const RcacConfig& cfg);

struct RcacUpdateResult {
  double u;           // control output, phi_k . theta_k (post-update gains)
  RcacSample sample;  // data the update consumed, for offline checks
};

// One filtered-RLS step: advance gamma with z_k, filter the regressor and
// control histories through gf, update (P, theta), emit u_k, push histories.
// Throws on non-finite results or covariance loss of definiteness.
RcacUpdateResult rcac_update(RcacState& s, const RcacConfig& cfg, double z_k,
                             const FirFilter& gf);

// Exact cost of the exponentially weighted retrospective problem at
// theta_hat, given the first k samples. Prior term uses lambda^k.
double batch_cost(const std::vector<RcacSample>& history,
                  const Eigen::VectorXd& theta_hat, const RcacConfig& cfg);

// Closed-form minimizer of batch_cost via accumulated normal equations.
Eigen::VectorXd batch_minimizer(const std::vector<RcacSample>& history,
                                const RcacConfig& cfg);

// Stateful wrapper used by the closed-loop driver.
class RcacController {
 public:
  explicit RcacController(const RcacConfig& cfg);

  double step(double z_k, const FirFilter& gf);

  const RcacState& state() const { return state_; }
  const RcacConfig& config() const { return cfg_; }
  const RcacSample& last_sample() const { return last_; }

 private:
  RcacConfig cfg_;
  RcacState state_;
  RcacSample last_;
};

// Fresh state: theta = theta_0, P = I / R_theta, empty histories.
RcacState make_rcac_state(const RcacConfig& cfg);

}  // namespace atla
