#pragma once

#include <Eigen/Dense>
#include <complex>
#include <functional>
#include <vector>

#include "atla/airframe.hpp"
#include "atla/fir_filter.hpp"

namespace atla {

// Continuous-time SISO model. For the missile channel the states are
// (mach, gamma, theta, q, delta, delta_dot), the input is the fin command,
// and the output is the tracking-error channel z.
struct LinearModel {
  Eigen::MatrixXd A;
  Eigen::VectorXd B;
  Eigen::RowVectorXd C;
  double D = 0.0;
};

using DynamicsFn =
    std::function<Eigen::VectorXd(const Eigen::VectorXd& x, double u)>;
using OutputFn = std::function<double(const Eigen::VectorXd& x, double u)>;

// Central differences with per-component step max(h_scale, h_scale * |x_i|).
Eigen::MatrixXd jacobian_state(const DynamicsFn& f, const Eigen::VectorXd& x0,
                               double u0, double h_scale = 1e-6);
Eigen::VectorXd jacobian_input(const DynamicsFn& f, const Eigen::VectorXd& x0,
                               double u0, double h_scale = 1e-6);

// Central-difference gradient of a scalar output map; returns (C, D).
std::pair<Eigen::RowVectorXd, double> output_row(const OutputFn& g,
                                                 const Eigen::VectorXd& x0,
                                                 double u0,
                                                 double h_scale = 1e-6);

// Zeros of C (sI - A)^posed B + D via the characteristic-polynomial
// recurrence and companion-matrix roots. Throws on an identically zero
// numerator (degenerate channel).
std::vector<std::complex<double>> transmission_zeros(const LinearModel& m);

// Roots of a real polynomial given coefficients from highest to lowest
// degree, via companion-matrix eigenvalues.
std::vector<std::complex<double>> polynomial_roots(
    const std::vector<double>& coeffs);

// Retrospective filter from the channel's right-half-plane zeros:
// sigma * prod_i (q - exp(s_i t_s)) / q^(n_z + 1), where sigma is the first
// nonzero Markov parameter of the ZOH-discretized model. Real RHP zeros are
// kept; complex pairs are excluded unless include_complex_pairs is set (any
// excluded are counted in n_complex_excluded when provided).
FirFilter build_gf(const std::vector<std::complex<double>>& zeros,
                   const LinearModel& m, double t_s,
                   bool include_complex_pairs = false,
                   int* n_complex_excluded = nullptr);

// ZOH discretization over one controller step.
std::pair<Eigen::MatrixXd, Eigen::VectorXd> discretize_zoh(
    const Eigen::MatrixXd& A, const Eigen::VectorXd& B, double t_s);

// Six-state reduced model of the missile (altitude frozen at the current
// value) with output z = -a_z.
LinearModel linearize_missile(const MissileState& s, double thrust, double u0,
                              const MissileParams& p);

}  // namespace atla
