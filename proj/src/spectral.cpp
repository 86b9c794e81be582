#include "qgraph/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <Eigen/Eigenvalues>

#include "qgraph/builders.hpp"
#include "qgraph/errors.hpp"

namespace qgraph {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

double phase_0_2pi(cplx z) {
  double t = std::arg(z);
  if (t < 0.0) t += kTwoPi;
  if (t >= kTwoPi - 1e-9) t = 0.0;
  return t;
}

bool all_neumann_like(const MetricGraph& g) { return g.all_neumann(); }

// k_max large enough that the spectrum holds more than `count` eigenvalues.
double k_max_for(const MetricGraph& g, int count) {
  return kPi * (count + 2.0 * g.edge_count() + 4.0) / g.total_length();
}

VertexCondition zeta_condition(double zeta) {
  return zeta == 0.0 ? VertexCondition::dirichlet() : VertexCondition::delta(-1.0 / zeta);
}

struct Tracked {
  double value = 0.0;
  double gap = 0.0;  // distance to the nearest other eigenvalue
};

Tracked nearest(const std::vector<double>& list, double target) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < list.size(); ++i) {
    if (std::abs(list[i] - target) < std::abs(list[best] - target)) best = i;
  }
  double gap = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < list.size(); ++i) {
    if (i != best) gap = std::min(gap, std::abs(list[i] - list[best]));
  }
  return {list[best], gap};
}

std::vector<double> eigenvalues_with_count(const MetricGraph& g, int count) {
  double k_max = k_max_for(g, count);
  for (;;) {
    auto list = precise_eigenvalues(g, k_max);
    if (static_cast<int>(list.size()) > count) return list;
    k_max *= 2.0;
  }
}

EigenfunctionRep simple_eigenfunction(const MetricGraph& g, double lambda) {
  if (!(lambda > 0.0)) {
    throw GraphError("eigenfunction derivative needs a positive eigenvalue");
  }
  const double k = std::sqrt(lambda);
  const auto fs = eigenfunction(g, {k, 1, lambda});
  return fs.front();
}

// Central difference of the eigenvalue nearest to lambda0 between two perturbed graphs.
double tracked_difference(const MetricGraph& minus, const MetricGraph& plus, double lambda0,
                          int count, double h) {
  const auto lm = nearest(eigenvalues_with_count(minus, count), lambda0);
  const auto lp = nearest(eigenvalues_with_count(plus, count), lambda0);
  const double shift = std::max(std::abs(lm.value - lambda0), std::abs(lp.value - lambda0));
  if (lm.gap < 10.0 * shift || lp.gap < 10.0 * shift) {
    throw NumericalError("eigenvalue tracking ambiguous: spacing below ten times the shift");
  }
  return (lp.value - lm.value) / (2.0 * h);
}

}  // namespace

CountingReport counting_trace_formula(const MetricGraph& g, double k, double epsilon) {
  if (!(epsilon >= 1e-8 && epsilon <= 1e-3)) {
    throw GraphError("epsilon must lie in [1e-8, 1e-3]");
  }
  if (!(k > 0.0)) throw GraphError("k must be positive");
  CountingReport r;
  r.k = k;
  r.epsilon = epsilon;
  r.direct_count = eigenvalues(g, k).count_below(k);
  r.weyl_term = g.total_length() * k / kPi;
  if (all_neumann_like(g)) {
    r.n0_exact = n0_constant(g);
    r.n0 = to_double(*r.n0_exact);
    r.exact_constant = true;
  } else {
    r.n0 = n0_general(g);
  }
  double phi = 0.0;
  for (int v = 0; v < g.vertex_count(); ++v) {
    const auto& c = g.condition(v);
    if (c.is_dirichlet() || c.coupling() == 0.0) continue;
    const double a = c.coupling();
    phi += -2.0 * std::atan(a / (k * g.degree(v))) + kPi * (a > 0.0 ? 1.0 : -1.0);
  }
  r.coupling_phase_term = phi / kTwoPi;
  const CMatrix u = quantum_evolution(g, cplx(k, epsilon));
  Eigen::ComplexEigenSolver<CMatrix> es(u, false);
  double im_log = 0.0;
  for (int i = 0; i < es.eigenvalues().size(); ++i) im_log += std::arg(1.0 - es.eigenvalues()(i));
  r.oscillatory_term = -im_log / kPi;
  r.trace_formula_value = r.n0 + r.weyl_term + r.coupling_phase_term + r.oscillatory_term;
  return r;
}

double n0_general(const MetricGraph& g) {
  MetricGraph g0 = g;
  for (int v = 0; v < g.vertex_count(); ++v) {
    const auto& c = g.condition(v);
    if (!c.is_dirichlet() && c.coupling() != 0.0) g0 = g0.with_condition(v, VertexCondition::dirichlet());
  }
  const CMatrix s0 = big_S(g0, 1.0);
  Eigen::ComplexEigenSolver<CMatrix> es(s0, false);
  double theta = 0.0;
  for (int i = 0; i < es.eigenvalues().size(); ++i) theta += phase_0_2pi(es.eigenvalues()(i));
  const int d0 = zero_mode_count(g) + static_cast<int>(negative_eigenvalues(g).size());
  return d0 - g.edge_count() + theta / kTwoPi;
}

Rational n0_constant(const MetricGraph& g) {
  if (!all_neumann_like(g)) throw GraphError("N0 = (C - beta)/2 holds for Neumann graphs only");
  const auto inv = invariants(g);
  return Rational(inv.components - inv.beta, 2);
}

int kernel_dim_I_minus_S(const MetricGraph& g) {
  if (!all_neumann_like(g)) throw GraphError("kernel of I - S is defined for Neumann graphs");
  const int n = g.directed_count();
  return kernel_dim(CMatrix::Identity(n, n) - big_S(g, 1.0));
}

UnitarySpectrum unitary_spectrum(const CMatrix& u) {
  UnitarySpectrum s;
  s.M = static_cast<int>(u.rows());
  s.U = u;
  Eigen::ComplexEigenSolver<CMatrix> es(u, false);
  for (int i = 0; i < es.eigenvalues().size(); ++i) {
    s.phases.push_back(phase_0_2pi(es.eigenvalues()(i)));
  }
  std::sort(s.phases.begin(), s.phases.end());
  return s;
}

UnitarySpectrum diagonal_unitary(const std::vector<double>& phases) {
  UnitarySpectrum s;
  s.M = static_cast<int>(phases.size());
  s.U = CMatrix::Zero(s.M, s.M);
  for (int i = 0; i < s.M; ++i) {
    double t = std::fmod(phases[i], kTwoPi);
    if (t < 0.0) t += kTwoPi;
    s.phases.push_back(t);
    s.U(i, i) = std::exp(cplx(0.0, t));
  }
  std::sort(s.phases.begin(), s.phases.end());
  return s;
}

double unitary_counting_raw(const UnitarySpectrum& u, double theta, double epsilon) {
  const double damp = std::exp(-epsilon);
  double sum = u.M * theta / kTwoPi;
  for (double t : u.phases) {
    sum -= std::arg(1.0 - damp * std::exp(cplx(0.0, t))) / kPi;
    sum += std::arg(1.0 - damp * std::exp(cplx(0.0, t - theta))) / kPi;
  }
  return sum;
}

double unitary_counting(const UnitarySpectrum& u, double theta, double epsilon) {
  return 2.0 * unitary_counting_raw(u, theta, epsilon) -
         unitary_counting_raw(u, theta, 2.0 * epsilon);
}

double unitary_direct_count(const std::vector<double>& phases, double theta) {
  auto step = [](double x) { return x > 0.0 ? 1.0 : (x == 0.0 ? 0.5 : 0.0); };
  double n = 0.0;
  for (double t : phases) {
    const int top = static_cast<int>(std::floor((theta - t) / kTwoPi)) + 1;
    for (int m = 0; m <= top; ++m) n += step(theta - t - kTwoPi * m) * step(t + kTwoPi * m);
  }
  return n;
}

InterlacingReport interlacing_check(const MetricGraph& star, int n, double alpha_pos,
                                    double alpha_neg, double slack) {
  if (n < 1 || n > 20) throw GraphError("interlacing check supports 1 <= n <= 20");
  if (!(alpha_pos > 0.0) || !(alpha_neg < 0.0)) {
    throw GraphError("interlacing needs one positive and one negative coupling");
  }
  const int c = star_centre(star);
  InterlacingReport r;
  auto spectrum = [&](VertexCondition cond) {
    auto list = eigenvalues_with_count(star.with_condition(c, cond), n + 1);
    list.resize(n + 1);
    return list;
  };
  r.neumann = spectrum(VertexCondition::neumann());
  r.positive = spectrum(VertexCondition::delta(alpha_pos));
  r.negative = spectrum(VertexCondition::delta(alpha_neg));
  r.dirichlet = spectrum(VertexCondition::dirichlet());
  auto require = [&](double lo, double hi, const std::string& what, int i) {
    if (lo > hi + slack * std::max(1.0, std::abs(hi))) {
      r.ok = false;
      r.violations.push_back(what + " at n=" + std::to_string(i + 1) + ": " +
                             std::to_string(lo) + " > " + std::to_string(hi));
    }
  };
  for (int i = 0; i < n; ++i) {
    require(r.neumann[i], r.positive[i], "lambda_n(0) <= lambda_n(alpha+)", i);
    require(r.positive[i], r.dirichlet[i], "lambda_n(alpha+) <= lambda_n(inf)", i);
    require(r.dirichlet[i], r.neumann[i + 1], "lambda_n(inf) <= lambda_n+1(0)", i);
    require(r.negative[i], r.neumann[i], "lambda_n(alpha-) <= lambda_n(0)", i);
    if (i > 0) require(r.dirichlet[i - 1], r.negative[i], "lambda_n-1(inf) <= lambda_n(alpha-)", i);
  }
  return r;
}

std::vector<StarExperimentRow> star_optimization_experiment(
    double total_length, const std::vector<std::vector<double>>& configs) {
  std::vector<StarExperimentRow> rows;
  for (const auto& lengths : configs) {
    if (lengths.empty()) throw GraphError("empty length partition");
    double sum = 0.0;
    for (double l : lengths) sum += l;
    if (std::abs(sum - total_length) > 1e-9 * std::max(1.0, total_length)) {
      throw GraphError("edge lengths do not sum to the total length");
    }
    const auto star = make_star(lengths, VertexCondition::neumann());
    const double l_max = *std::max_element(lengths.begin(), lengths.end());
    // sin(pi x / l_max) on the longest edge bounds k1 from above
    const auto s = eigenvalues(star, 1.1 * kPi / l_max);
    if (s.points.empty()) throw NumericalError("no eigenvalue below the variational bound");
    rows.push_back({lengths, s.points.front().k});
  }
  return rows;
}

std::vector<double> precise_eigenvalues(const MetricGraph& g, double k_max) {
  const auto s = eigenvalues(g, k_max, 1e-13);
  std::vector<double> out;
  for (auto it = s.negative.rbegin(); it != s.negative.rend(); ++it) out.push_back(-(*it) * (*it));
  for (int i = 0; i < s.zero_multiplicity; ++i) out.push_back(0.0);
  for (const auto& p : s.points) {
    double k = p.k;
    if (p.multiplicity == 1) {
      const double a = k - 1e-9 * std::max(1.0, k);
      const double b = k + 1e-9 * std::max(1.0, k);
      try {
        k = refine_root(g, a, b, 0.0);
      } catch (const NumericalError&) {
        // tangential zero: golden-section estimate stands
      }
    }
    for (int i = 0; i < p.multiplicity; ++i) out.push_back(k * k);
  }
  return out;
}

HellmannFeynmanResult hellmann_feynman_alpha(const MetricGraph& g, int v, int n, double h) {
  if (!(h >= 1e-6 && h <= 1e-3)) throw GraphError("step h must lie in [1e-6, 1e-3]");
  const auto& c = g.condition(v);
  if (c.is_dirichlet()) throw GraphError("coupling derivative needs a non-Dirichlet vertex");
  const double alpha = c.coupling();
  const auto list = eigenvalues_with_count(g, n + 1);
  const double lambda = list.at(n);
  if ((n > 0 && std::abs(list[n - 1] - lambda) < 1e-8) ||
      std::abs(list[n + 1] - lambda) < 1e-8) {
    throw GraphError("eigenvalue is not simple");
  }
  HellmannFeynmanResult r;
  r.eigenvalue = lambda;
  r.numeric = tracked_difference(g.with_condition(v, VertexCondition::delta(alpha - h)),
                                 g.with_condition(v, VertexCondition::delta(alpha + h)), lambda,
                                 n + 1, h);
  r.predicted = std::norm(simple_eigenfunction(g, lambda).vertex_values(v));
  r.mismatch = std::abs(r.numeric - r.predicted);
  return r;
}

HellmannFeynmanResult hellmann_feynman_zeta(const MetricGraph& g, int v, double zeta, int n,
                                            double h) {
  if (!(h >= 1e-6 && h <= 1e-3)) throw GraphError("step h must lie in [1e-6, 1e-3]");
  const auto g0 = g.with_condition(v, zeta_condition(zeta));
  const auto list = eigenvalues_with_count(g0, n + 1);
  const double lambda = list.at(n);
  if ((n > 0 && std::abs(list[n - 1] - lambda) < 1e-8) ||
      std::abs(list[n + 1] - lambda) < 1e-8) {
    throw GraphError("eigenvalue is not simple");
  }
  HellmannFeynmanResult r;
  r.eigenvalue = lambda;
  r.numeric = tracked_difference(g.with_condition(v, zeta_condition(zeta - h)),
                                 g.with_condition(v, zeta_condition(zeta + h)), lambda, n + 1, h);
  r.predicted = std::norm(derivative_sum(g0, simple_eigenfunction(g0, lambda), v));
  r.mismatch = std::abs(r.numeric - r.predicted);
  return r;
}

DiscreteBridge discrete_bridge(const MetricGraph& g, double l, double k_max) {
  if (!g.all_neumann()) throw GraphError("discrete bridge needs Neumann vertices");
  if (g.has_loops()) throw GraphError("discrete bridge does not support loops");
  for (const auto& e : g.edges()) {
    if (std::abs(e.length - l) > 1e-12 * l) throw GraphError("graph is not equilateral");
  }
  const int nv = g.vertex_count();
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(nv, nv);
  for (const auto& e : g.edges()) {
    c(e.a, e.b) += 1.0;
    c(e.b, e.a) += 1.0;
  }
  DiscreteBridge b;
  b.l = l;
  b.A = c;
  Eigen::VectorXd dinv_sqrt(nv);
  for (int v = 0; v < nv; ++v) {
    b.A.row(v) /= g.degree(v);
    dinv_sqrt(v) = 1.0 / std::sqrt(static_cast<double>(g.degree(v)));
  }
  const Eigen::MatrixXd sym = dinv_sqrt.asDiagonal() * c * dinv_sqrt.asDiagonal();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym, Eigen::EigenvaluesOnly);
  for (int i = 0; i < nv; ++i) b.lambdas.push_back(std::clamp(es.eigenvalues()(i), -1.0, 1.0));

  // group equal eigenvalues
  std::vector<std::pair<double, int>> groups;
  for (double lam : b.lambdas) {
    if (!groups.empty() && std::abs(groups.back().first - lam) < 1e-10) {
      ++groups.back().second;
    } else {
      groups.emplace_back(lam, 1);
    }
  }
  for (const auto& [lam, mult] : groups) {
    if (std::abs(lam) >= 1.0 - 1e-12) continue;
    const double t = std::acos(lam);
    for (int m = 0;; ++m) {
      const double k1 = (t + kTwoPi * m) / l;
      const double k2 = (-t + kTwoPi * (m + 1)) / l;
      if (k1 > k_max) break;
      b.k_values.push_back({k1, lam, mult});
      if (k2 <= k_max) b.k_values.push_back({k2, lam, mult});
    }
  }
  std::sort(b.k_values.begin(), b.k_values.end(),
            [](const BridgeValue& x, const BridgeValue& y) { return x.k < y.k; });
  const int n = g.directed_count();
  for (int m = 1; m * kPi / l <= k_max; ++m) {
    const double k = m * kPi / l;
    const int dim = kernel_dim(CMatrix::Identity(n, n) - quantum_evolution(g, k));
    if (dim > 0) b.exceptional.push_back({k, m % 2 == 0 ? 1.0 : -1.0, dim});
  }
  return b;
}

}  // namespace qgraph
