#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

namespace qgraph::test {

// Second-order finite differences for -f'' on [-l1, l2] with Dirichlet ends and a point
// coupling alpha * f(0) at the node x = 0. The generalized problem K f = lambda W f (lumped
// mass) is symmetrized to a tridiagonal matrix and solved by Sturm-sequence bisection.
class DeltaIntervalFD {
 public:
  DeltaIntervalFD(double l1, double l2, double alpha, int points = 100000) {
    const int n1 = std::max(2, static_cast<int>(std::lround(points * l1 / (l1 + l2))));
    const int n2 = std::max(2, points - n1);
    const double h1 = l1 / n1;
    const double h2 = l2 / n2;
    // interior nodes: n1 - 1 on the left, the junction, n2 - 1 on the right
    const int n = n1 + n2 - 1;
    const int j = n1 - 1;
    std::vector<double> hl(n), hr(n);
    for (int i = 0; i < n; ++i) {
      hl[i] = i <= j ? h1 : h2;
      hr[i] = i < j ? h1 : h2;
    }
    diag_.resize(n);
    off_.resize(n - 1);
    std::vector<double> w(n);
    for (int i = 0; i < n; ++i) {
      w[i] = 0.5 * (hl[i] + hr[i]);
      diag_[i] = 1.0 / hl[i] + 1.0 / hr[i];
    }
    diag_[j] += alpha;
    for (int i = 0; i < n; ++i) diag_[i] /= w[i];
    for (int i = 0; i + 1 < n; ++i) off_[i] = -(1.0 / hr[i]) / std::sqrt(w[i] * w[i + 1]);
  }

  // Number of eigenvalues below x.
  int count_below(double x) const {
    int c = 0;
    double q = diag_[0] - x;
    if (q < 0.0) ++c;
    for (std::size_t i = 1; i < diag_.size(); ++i) {
      if (q == 0.0) q = 1e-300;
      q = diag_[i] - x - off_[i - 1] * off_[i - 1] / q;
      if (q < 0.0) ++c;
    }
    return c;
  }

  // The n-th eigenvalue (0-based) of the discretized operator.
  double eigenvalue(int n) const {
    double lo = -1.0;
    while (count_below(lo) > n) lo *= 2.0;
    double hi = 1.0;
    while (count_below(hi) <= n) hi *= 2.0;
    for (int it = 0; it < 200 && hi - lo > 1e-13 * std::max(1.0, std::abs(hi)); ++it) {
      const double m = 0.5 * (lo + hi);
      if (count_below(m) > n) {
        hi = m;
      } else {
        lo = m;
      }
    }
    return 0.5 * (lo + hi);
  }

 private:
  std::vector<double> diag_;
  std::vector<double> off_;
};

}  // namespace qgraph::test
