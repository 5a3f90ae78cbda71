#include "atla/linearize.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace atla {

namespace {

double step_for(double x, double h_scale) {
  return std::max(h_scale, h_scale * std::abs(x));
}

void require_finite(const Eigen::VectorXd& v, const char* what) {
  if (!v.allFinite())
    throw std::runtime_error(std::string("linearize: non-finite ") + what);
}

}  // namespace

Eigen::MatrixXd jacobian_state(const DynamicsFn& f, const Eigen::VectorXd& x0,
                               double u0, double h_scale) {
  const int n = static_cast<int>(x0.size());
  const int m = static_cast<int>(f(x0, u0).size());
  Eigen::MatrixXd A(m, n);
  Eigen::VectorXd xp = x0, xm = x0;
  for (int j = 0; j < n; ++j) {
    const double h = step_for(x0[j], h_scale);
    xp[j] = x0[j] + h;
    xm[j] = x0[j] - h;
    const Eigen::VectorXd fp = f(xp, u0);
    const Eigen::VectorXd fm = f(xm, u0);
    require_finite(fp, "perturbed dynamics");
    require_finite(fm, "perturbed dynamics");
    A.col(j) = (fp - fm) / (2.0 * h);
    xp[j] = x0[j];
    xm[j] = x0[j];
  }
  return A;
}

Eigen::VectorXd jacobian_input(const DynamicsFn& f, const Eigen::VectorXd& x0,
                               double u0, double h_scale) {
  const double h = step_for(u0, h_scale);
  const Eigen::VectorXd fp = f(x0, u0 + h);
  const Eigen::VectorXd fm = f(x0, u0 - h);
  require_finite(fp, "perturbed dynamics");
  require_finite(fm, "perturbed dynamics");
  return (fp - fm) / (2.0 * h);
}

std::pair<Eigen::RowVectorXd, double> output_row(const OutputFn& g,
                                                 const Eigen::VectorXd& x0,
                                                 double u0, double h_scale) {
  const int n = static_cast<int>(x0.size());
  Eigen::RowVectorXd C(n);
  Eigen::VectorXd xp = x0, xm = x0;
  for (int j = 0; j < n; ++j) {
    const double h = step_for(x0[j], h_scale);
    xp[j] = x0[j] + h;
    xm[j] = x0[j] - h;
    C[j] = (g(xp, u0) - g(xm, u0)) / (2.0 * h);
    xp[j] = x0[j];
    xm[j] = x0[j];
  }
  const double hu = step_for(u0, h_scale);
  const double D = (g(x0, u0 + hu) - g(x0, u0 - hu)) / (2.0 * hu);
  if (!C.allFinite() || !std::isfinite(D))
    throw std::runtime_error("linearize: non-finite output gradient");
  return {C, D};
}

std::vector<std::complex<double>> polynomial_roots(
    const std::vector<double>& coeffs) {
  // Strip leading zeros relative to the largest coefficient.
  double cmax = 0.0;
  for (double c : coeffs) cmax = std::max(cmax, std::abs(c));
  if (cmax == 0.0) return {};
  const double tol = 1e-10 * cmax;

  std::size_t lead = 0;
  while (lead < coeffs.size() && std::abs(coeffs[lead]) <= tol) ++lead;
  std::vector<double> p(coeffs.begin() + lead, coeffs.end());
  if (p.size() <= 1) return {};

  // Factor out roots at the origin (trailing near-zero coefficients).
  while (p.size() > 1 && std::abs(p.back()) <= tol) p.pop_back();
  const int deg = static_cast<int>(p.size()) - 1;
  if (deg < 1) return {};

  // First-row companion of the monic polynomial p / p[0].
  Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(deg, deg);
  for (int i = 0; i < deg - 1; ++i) companion(i + 1, i) = 1.0;
  for (int i = 0; i < deg; ++i) companion(0, i) = -p[i + 1] / p[0];

  Eigen::EigenSolver<Eigen::MatrixXd> es(companion, false);
  std::vector<std::complex<double>> roots(deg);
  for (int i = 0; i < deg; ++i) roots[i] = es.eigenvalues()[i];
  return roots;
}

std::vector<std::complex<double>> transmission_zeros(const LinearModel& m) {
  const int n = static_cast<int>(m.A.rows());
  if (m.A.cols() != n || m.B.size() != n || m.C.size() != n)
    throw std::invalid_argument("transmission_zeros: inconsistent dimensions");

  // Faddeev-LeVerrier: (sI - A)^-1 = sum_i N_i s^(n-1-i) / chi(s).
  Eigen::MatrixXd N = Eigen::MatrixXd::Identity(n, n);
  std::vector<double> chi(n + 1);
  chi[0] = 1.0;
  std::vector<double> num(n + 1, 0.0);
  num[0] = m.D;
  for (int i = 1; i <= n; ++i) {
    num[i] = (m.C * N * m.B).value();
    const Eigen::MatrixXd M = m.A * N;
    chi[i] = -M.trace() / static_cast<double>(i);
    N = M + chi[i] * Eigen::MatrixXd::Identity(n, n);
  }
  if (m.D != 0.0) {
    for (int i = 1; i <= n; ++i) num[i] += m.D * chi[i];
  }

  double nmax = 0.0;
  for (double c : num) nmax = std::max(nmax, std::abs(c));
  if (nmax == 0.0)
    throw std::runtime_error("transmission_zeros: degenerate channel");

  return polynomial_roots(num);
}

std::pair<Eigen::MatrixXd, Eigen::VectorXd> discretize_zoh(
    const Eigen::MatrixXd& A, const Eigen::VectorXd& B, double t_s) {
  const int n = static_cast<int>(A.rows());
  Eigen::MatrixXd aug = Eigen::MatrixXd::Zero(n + 1, n + 1);
  aug.topLeftCorner(n, n) = A * t_s;
  aug.topRightCorner(n, 1) = B * t_s;
  const Eigen::MatrixXd e = aug.exp();
  return {e.topLeftCorner(n, n), e.topRightCorner(n, 1)};
}

FirFilter build_gf(const std::vector<std::complex<double>>& zeros,
                   const LinearModel& m, double t_s,
                   bool include_complex_pairs, int* n_complex_excluded) {
  if (!(t_s > 0.0)) throw std::invalid_argument("build_gf: t_s must be > 0");

  std::vector<std::complex<double>> kept;
  int excluded = 0;
  for (const auto& s : zeros) {
    if (s.real() <= 0.0) continue;
    const bool real_zero = std::abs(s.imag()) <= 1e-8 * (1.0 + std::abs(s.real()));
    if (real_zero) {
      kept.emplace_back(s.real(), 0.0);
    } else if (include_complex_pairs) {
      kept.push_back(s);
    } else {
      ++excluded;
    }
  }
  if (n_complex_excluded) *n_complex_excluded = excluded;

  // First nonzero Markov parameter of the discretized channel sets the scale.
  const auto [Ad, Bd] = discretize_zoh(m.A, m.B, t_s);
  double sigma = 0.0;
  Eigen::VectorXd v = Bd;
  for (int j = 1; j <= 10; ++j) {
    const double hj = m.C.dot(v);
    if (std::abs(hj) > 1e-12) {
      sigma = hj;
      break;
    }
    v = Ad * v;
  }
  if (sigma == 0.0)
    throw std::runtime_error("build_gf: degenerate channel (all Markov parameters below threshold)");

  // Expand sigma * prod (q - exp(s_i t_s)) and read taps off at lags 1..n_z+1.
  std::vector<std::complex<double>> poly{1.0};
  for (const auto& s : kept) {
    const std::complex<double> zd = std::exp(s * t_s);
    std::vector<std::complex<double>> next(poly.size() + 1, 0.0);
    for (std::size_t i = 0; i < poly.size(); ++i) {
      next[i] += poly[i];
      next[i + 1] -= poly[i] * zd;
    }
    poly = std::move(next);
  }

  FirFilter f;
  f.taps.reserve(poly.size());
  for (std::size_t j = 0; j < poly.size(); ++j) {
    f.taps.push_back({static_cast<int>(j) + 1, sigma * poly[j].real()});
  }
  return f;
}

LinearModel linearize_missile(const MissileState& s, double thrust, double u0,
                              const MissileParams& p) {
  const double h_frozen = s.h;
  auto unpack = [&](const Eigen::VectorXd& x) {
    MissileState ms;
    ms.mach = x[0];
    ms.gamma = x[1];
    ms.theta = x[2];
    ms.q = x[3];
    ms.h = h_frozen;
    ms.X = 0.0;
    ms.delta = x[4];
    ms.delta_dot = x[5];
    return ms;
  };

  DynamicsFn f = [&](const Eigen::VectorXd& x, double u) {
    const MissileState d = state_derivative(unpack(x), thrust, u, p);
    Eigen::VectorXd dx(6);
    dx << d.mach, d.gamma, d.theta, d.q, d.delta, d.delta_dot;
    return dx;
  };
  OutputFn g = [&](const Eigen::VectorXd& x, double) {
    return -imu_outputs(unpack(x), p).a_z;
  };

  Eigen::VectorXd x0(6);
  x0 << s.mach, s.gamma, s.theta, s.q, s.delta, s.delta_dot;

  LinearModel m;
  m.A = jacobian_state(f, x0, u0);
  m.B = jacobian_input(f, x0, u0);
  std::tie(m.C, m.D) = output_row(g, x0, u0);
  return m;
}

}  // namespace atla
