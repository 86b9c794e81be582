#pragma once

#include <string>
#include <vector>

#include "qgraph/scattering.hpp"

namespace qgraph {

enum class Classification { Mixing, ErgodicNotMixing, NotErgodic };

std::string to_string(Classification c);

// Classical Markov map M = |U(k)|^2 on directed edges.
struct MarkovMap {
  Eigen::MatrixXd M;
  std::vector<cplx> eigenvalues;  // sorted by |1 - lambda|
  double gap = 0.0;               // min over i >= 2 of |1 - lambda_i|
  double gap_modulus = 0.0;       // min over i >= 2 of 1 - |lambda_i|
  int unit_multiplicity = 0;      // eigenvalues within 1e-10 of 1
  double bistochastic_defect = 0.0;
};

// Throws GraphError for k = 0 on graphs with nonzero couplings.
MarkovMap classical_map(const MetricGraph& g, double k = 1.0);

// M^n p0. Throws GraphError unless p0 is a probability vector (entries >= 0, sum 1 within 1e-12).
Eigen::VectorXd evolve(const MarkovMap& m, const Eigen::VectorXd& p0, int n);

// True iff the support digraph of M is strongly connected.
bool dynamical_connectivity(const MarkovMap& m);

struct ClassificationReport {
  Classification classification = Classification::NotErgodic;
  double gap = 0.0;
  double gap_modulus = 0.0;
  // Largest L1 distance to the uniform vector over all point-mass starts.
  double cesaro_distance = 0.0;  // of the Cesaro average after cesaro_steps
  double plain_distance = 0.0;   // of M^n after plain_steps
  long long cesaro_steps = 0;
  long long plain_steps = 0;
  bool iteration_agrees = false;  // iteration limits match the spectral classification
};

// Mixing if gap_modulus > 1e-10, else ergodic if gap > 1e-10 and the unit eigenvalue is
// simple, else not ergodic. The iteration check uses exact power sums by doubling.
ClassificationReport classify(const MarkovMap& m);

// Steps until every point-mass start is within tol of uniform in L1, or -1 after max_steps.
int iterations_to_equilibrium(const MarkovMap& m, double tol, int max_steps = 1000000);

}  // namespace qgraph
