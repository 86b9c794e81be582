#include "qgraph/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

#include "qgraph/errors.hpp"

namespace qgraph {

namespace {

constexpr double kGapTol = 1e-10;
constexpr double kConvergenceTol = 1e-6;
constexpr double kSupportTol = 1e-12;

// Largest column L1 distance of a from the matrix with every column uniform.
double distance_to_uniform(const Eigen::MatrixXd& a) {
  const double u = 1.0 / a.rows();
  return (a.array() - u).abs().colwise().sum().maxCoeff();
}

bool reachable_all(const Eigen::MatrixXd& m, bool transpose) {
  const int n = static_cast<int>(m.rows());
  std::vector<bool> seen(n, false);
  std::queue<int> q;
  q.push(0);
  seen[0] = true;
  int count = 1;
  while (!q.empty()) {
    const int j = q.front();
    q.pop();
    for (int i = 0; i < n; ++i) {
      const double w = transpose ? m(j, i) : m(i, j);
      if (seen[i] || w <= kSupportTol) continue;
      seen[i] = true;
      ++count;
      q.push(i);
    }
  }
  return count == n;
}

}  // namespace

std::string to_string(Classification c) {
  switch (c) {
    case Classification::Mixing:
      return "mixing";
    case Classification::ErgodicNotMixing:
      return "ergodic_not_mixing";
    case Classification::NotErgodic:
      return "not_ergodic";
  }
  return "unknown";
}

MarkovMap classical_map(const MetricGraph& g, double k) {
  if (k == 0.0) {
    for (int v = 0; v < g.vertex_count(); ++v) {
      if (g.condition(v).coupling() != 0.0) throw GraphError("k = 0 with a nonzero coupling");
    }
    k = 1.0;  // M does not depend on k without couplings
  }
  MarkovMap m;
  m.M = quantum_evolution(g, k).cwiseAbs2();
  m.bistochastic_defect = std::max((m.M.rowwise().sum().array() - 1.0).abs().maxCoeff(),
                                   (m.M.colwise().sum().array() - 1.0).abs().maxCoeff());
  Eigen::EigenSolver<Eigen::MatrixXd> es(m.M, false);
  for (int i = 0; i < es.eigenvalues().size(); ++i) m.eigenvalues.push_back(es.eigenvalues()(i));
  std::stable_sort(m.eigenvalues.begin(), m.eigenvalues.end(), [](cplx a, cplx b) {
    return std::abs(1.0 - a) < std::abs(1.0 - b);
  });
  for (const auto& l : m.eigenvalues) m.unit_multiplicity += std::abs(1.0 - l) < kGapTol;
  if (m.eigenvalues.size() < 2) {
    m.gap = m.gap_modulus = 0.0;
    return m;
  }
  m.gap = std::abs(1.0 - m.eigenvalues[1]);
  m.gap_modulus = 1.0;
  for (std::size_t i = 1; i < m.eigenvalues.size(); ++i) {
    m.gap_modulus = std::min(m.gap_modulus, 1.0 - std::abs(m.eigenvalues[i]));
  }
  return m;
}

Eigen::VectorXd evolve(const MarkovMap& m, const Eigen::VectorXd& p0, int n) {
  if (p0.size() != m.M.rows()) throw GraphError("probability vector has the wrong size");
  if (n < 0) throw GraphError("negative step count");
  if ((p0.array() < 0.0).any() || std::abs(p0.sum() - 1.0) > 1e-12) {
    throw GraphError("p0 is not a probability vector");
  }
  Eigen::VectorXd p = p0;
  for (int i = 0; i < n; ++i) p = m.M * p;
  return p;
}

bool dynamical_connectivity(const MarkovMap& m) {
  if (m.M.rows() == 0) return false;
  return reachable_all(m.M, false) && reachable_all(m.M, true);
}

ClassificationReport classify(const MarkovMap& m) {
  ClassificationReport r;
  r.gap = m.gap;
  r.gap_modulus = m.gap_modulus;
  if (m.unit_multiplicity > 1 || m.gap <= kGapTol) {
    r.classification = Classification::NotErgodic;
  } else if (m.gap_modulus > kGapTol) {
    r.classification = Classification::Mixing;
  } else {
    r.classification = Classification::ErgodicNotMixing;
  }

  // Sum_{j=1}^{2^t} M^j and M^{2^t}, doubling t. Cesaro error decays like 1/(n gap).
  const int n = static_cast<int>(m.M.rows());
  Eigen::MatrixXd power = m.M;
  Eigen::MatrixXd sum = m.M;
  long long steps = 1;
  const double needed = 1e3 / (kConvergenceTol * std::max(m.gap, kGapTol));
  while (steps < needed && steps < (1LL << 40)) {
    sum += power * sum;
    power = power * power;
    steps *= 2;
  }
  r.cesaro_steps = steps;
  r.cesaro_distance = distance_to_uniform(sum / static_cast<double>(steps));

  if (m.gap_modulus > kGapTol) {
    r.plain_steps = static_cast<long long>(std::ceil(20.0 / m.gap_modulus));
    Eigen::MatrixXd p = Eigen::MatrixXd::Identity(n, n);
    for (long long i = 0; i < r.plain_steps; ++i) p = m.M * p;
    r.plain_distance = distance_to_uniform(p);
  } else {
    // M^steps and M^(steps + 1) from the doubling above.
    r.plain_steps = steps;
    r.plain_distance = std::max(distance_to_uniform(power), distance_to_uniform(m.M * power));
  }

  const bool cesaro = r.cesaro_distance < kConvergenceTol;
  const bool plain = r.plain_distance < kConvergenceTol;
  switch (r.classification) {
    case Classification::Mixing:
      r.iteration_agrees = cesaro && plain;
      break;
    case Classification::ErgodicNotMixing:
      r.iteration_agrees = cesaro && !plain;
      break;
    case Classification::NotErgodic:
      r.iteration_agrees = !cesaro && !plain;
      break;
  }
  return r;
}

int iterations_to_equilibrium(const MarkovMap& m, double tol, int max_steps) {
  const int n = static_cast<int>(m.M.rows());
  Eigen::MatrixXd p = Eigen::MatrixXd::Identity(n, n);
  for (int i = 0; i <= max_steps; ++i) {
    if (distance_to_uniform(p) < tol) return i;
    p = m.M * p;
  }
  return -1;
}

}  // namespace qgraph
