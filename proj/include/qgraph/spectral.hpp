#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qgraph/secular.hpp"

namespace qgraph {

struct CountingReport {
  double k = 0.0;
  double epsilon = 0.0;
  int direct_count = 0;
  double trace_formula_value = 0.0;
  double n0 = 0.0;                       // constant term used in the formula
  std::optional<Rational> n0_exact;      // (C - beta)/2 for Neumann graphs
  double weyl_term = 0.0;                // L k / pi
  double coupling_phase_term = 0.0;      // k-dependent phase of det S over 2 pi
  double oscillatory_term = 0.0;         // -(1/pi) Im log det(I - U(k + i eps))
  bool exact_constant = false;           // n0 is the proven Neumann constant
};

// N(k) = N0 + L k / pi + Phi_S(k) / (2 pi) - (1/pi) sum_j Im log(1 - lambda_j(U(k + i eps)))
// with the principal logarithm per eigenvalue. Phi_S vanishes on Neumann/Dirichlet graphs.
CountingReport counting_trace_formula(const MetricGraph& g, double k, double epsilon);

// General constant term d0 - E + sum theta_j(S0) / (2 pi), with S0 the k -> 0+ limit of S
// and d0 the number of eigenvalues <= 0. Equals (C - beta)/2 on Neumann graphs.
double n0_general(const MetricGraph& g);

// (C - beta)/2 in exact arithmetic; rejects graphs with non-Neumann vertices.
Rational n0_constant(const MetricGraph& g);

// Numerical dim ker(I - S) for a Neumann graph.
int kernel_dim_I_minus_S(const MetricGraph& g);

struct UnitarySpectrum {
  int M = 0;
  std::vector<double> phases;  // in [0, 2 pi)
  CMatrix U;
};

UnitarySpectrum unitary_spectrum(const CMatrix& u);
UnitarySpectrum diagonal_unitary(const std::vector<double>& phases);

// M theta / 2pi - (1/pi) Im log det(1 - e^{-eps} U) + (1/pi) Im log det(1 - e^{-i theta} e^{-eps} U)
double unitary_counting_raw(const UnitarySpectrum& u, double theta, double epsilon);
// Richardson limit 2 F(eps) - F(2 eps) of the raw value, which removes the O(eps) bias.
double unitary_counting(const UnitarySpectrum& u, double theta, double epsilon);
// sum_l sum_n step(theta - theta_l - 2 pi n) step(theta_l + 2 pi n), step(0) = 1/2.
double unitary_direct_count(const std::vector<double>& phases, double theta);

struct InterlacingReport {
  bool ok = true;
  std::vector<std::string> violations;
  std::vector<double> neumann, positive, negative, dirichlet;  // eigenvalues k^2
};

// First n eigenvalues of the star for centre condition alpha in {0, alpha_pos, alpha_neg, inf}
// and the chains lambda_n(0) <= lambda_n(a+) <= lambda_n(inf) <= lambda_{n+1}(0),
// lambda_n(a-) <= lambda_n(0) and lambda_{n-1}(inf) <= lambda_n(a-).
InterlacingReport interlacing_check(const MetricGraph& star, int n, double alpha_pos = 1.0,
                                    double alpha_neg = -1.0, double slack = 1e-9);

struct StarExperimentRow {
  std::vector<double> lengths;
  double k1 = 0.0;
};

// First eigenvalue of the Neumann-centre, Dirichlet-leaf star for each length partition.
std::vector<StarExperimentRow> star_optimization_experiment(
    double total_length, const std::vector<std::vector<double>>& configs);

struct HellmannFeynmanResult {
  double numeric = 0.0;    // central difference of lambda_n
  double predicted = 0.0;  // |f(v)|^2 or |sum f'(v)|^2
  double mismatch = 0.0;   // |numeric - predicted|
  double eigenvalue = 0.0;
};

// Index n counts eigenvalues k^2 from the bottom (negative ones included), 0-based.
HellmannFeynmanResult hellmann_feynman_alpha(const MetricGraph& g, int v, int n, double h);
// Vertex v reparametrized as zeta sum f'(v) = -f(v), i.e. alpha = -1/zeta; zeta = 0 is Dirichlet.
HellmannFeynmanResult hellmann_feynman_zeta(const MetricGraph& g, int v, double zeta, int n,
                                            double h);

// Sorted eigenvalues k^2 of g below k_max^2 with full-precision roots.
std::vector<double> precise_eigenvalues(const MetricGraph& g, double k_max);

struct BridgeValue {
  double k = 0.0;
  double lambda = 0.0;  // eigenvalue of A with cos(k l) = lambda
  int multiplicity = 1;
};

struct DiscreteBridge {
  Eigen::MatrixXd A;
  std::vector<double> lambdas;  // ascending
  double l = 0.0;
  std::vector<BridgeValue> k_values;   // from lambdas in (-1, 1), ascending, k <= k_max
  std::vector<BridgeValue> exceptional;  // k = m pi / l with a nontrivial kernel of I - U
};

// Equilateral Neumann graph without loops; A = D^{-1} C.
DiscreteBridge discrete_bridge(const MetricGraph& g, double l, double k_max);

}  // namespace qgraph
