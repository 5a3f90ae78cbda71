#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <deque>
#include <vector>

namespace atla {

// Strictly proper FIR filter: taps act on delayed samples only (lag >= 1).
struct FirTap {
  int lag;       // samples of delay, >= 1
  double value;  // coefficient
};

struct FirFilter {
  std::vector<FirTap> taps;

  int order() const {
    int n = 0;
    for (const auto& t : taps) n = std::max(n, t.lag);
    return n;
  }
};

// Delay lines store x_{k-1} at the front. Entries beyond the stored history
// are treated as zero (histories start from rest).
inline double filter_signal(const FirFilter& f,
                            const std::deque<double>& line) {
  double y = 0.0;
  for (const auto& t : f.taps) {
    const int i = t.lag - 1;
    if (i >= 0 && i < static_cast<int>(line.size())) y += t.value * line[i];
  }
  return y;
}

inline Eigen::VectorXd filter_signal(const FirFilter& f,
                                     const std::deque<Eigen::VectorXd>& line,
                                     int dim) {
  Eigen::VectorXd y = Eigen::VectorXd::Zero(dim);
  for (const auto& t : f.taps) {
    const int i = t.lag - 1;
    if (i >= 0 && i < static_cast<int>(line.size())) y += t.value * line[i];
  }
  return y;
}

}  // namespace atla
