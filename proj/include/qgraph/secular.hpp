#pragma once

#include <vector>

#include "qgraph/scattering.hpp"

namespace qgraph {

enum class SecularMethod { Det, Real, Vertex, Star };

// det(I - U(k)).
cplx secular_det(const MetricGraph& g, cplx k);

// sqrt(det(S* T*)) det(I - U(k)) for real k > 0, with the square-root sheet fixed
// analytically so the result is continuous in k. Throws NumericalError if the
// imaginary residue exceeds 1e-6 relative to the magnitude.
double secular_real(const MetricGraph& g, double k);

// alpha0/k + sum_i cot(k l_i) on a star with Delta/Neumann centre and Dirichlet leaves.
// Throws NumericalError within |sin(k l_i)| < 1e-12 of a pole.
double secular_star_cot(const MetricGraph& star, double k);

// det M(k) * prod_e sin(k l_e), M the vertex matrix with rows scaled by k:
// M_ii = k sum cot(k l) + alpha_i, M_ij = -k sum 1/sin(k l), Dirichlet rows f_i = 0.
// Rejects graphs with loops.
double secular_vertex(const MetricGraph& g, double k);

// Number of singular values of `a` below rel * max(1, largest singular value).
int kernel_dim(const CMatrix& a, double rel = 1e-8);

// Smallest singular value of I - U(k).
double sigma_min(const MetricGraph& g, double k);

struct SpectralPoint {
  double k = 0.0;
  int multiplicity = 1;
  double eigenvalue = 0.0;  // k^2
};

struct Spectrum {
  std::vector<SpectralPoint> points;  // positive k, ascending
  std::vector<double> negative;       // kappa > 0 (eigenvalue -kappa^2), ascending in kappa
  int zero_multiplicity = 0;          // dimension of the k = 0 eigenspace
  double k_max = 0.0;

  // Eigenvalues k^2 (negatives included) in order, each repeated by multiplicity.
  std::vector<double> eigenvalue_list() const;
  // Number of eigenvalues strictly below k^2, negatives and zero modes included.
  int count_below(double k) const;
};

// All eigenvalues with 0 < k <= k_max, plus zero modes and negative eigenvalues.
// Throws NumericalError if the Weyl envelope check still fails after a refined rescan.
Spectrum eigenvalues(const MetricGraph& g, double k_max, double tol = 1e-12,
                     SecularMethod method = SecularMethod::Real);

// Positive roots only, in the chosen method, without multiplicity bookkeeping of zero
// modes. Each root is listed once per multiplicity.
std::vector<double> secular_roots(const MetricGraph& g, double k_max, double tol,
                                  SecularMethod method);

// Number of components whose vertices are all Neumann-like (constant eigenfunctions).
int zero_mode_count(const MetricGraph& g);

// kappa values (ascending) such that -kappa^2 is an eigenvalue, with multiplicity.
std::vector<double> negative_eigenvalues(const MetricGraph& g);

// Number of eigenvalues of the graph strictly below -kappa^2, kappa > 0.
int count_below_negative(const MetricGraph& g, double kappa);

// Refines a simple root of secular_real inside [a, b] (sign change required).
double refine_root(const MetricGraph& g, double a, double b, double tol = 1e-14);

// Eigenfunction on every edge e: f_e(x) = A_e e^{ikx} + B_e e^{-ikx}, x from endpoint a.
// a_out[d] is the amplitude leaving the origin of directed edge d, a_in[d] the amplitude
// arriving at its terminus, so a_in solves (I - U) a_in = 0 and a_out = S a_in.
struct EigenfunctionRep {
  double k = 0.0;
  CVector a_in;
  CVector a_out;
  CVector vertex_values;

  cplx coefficient_A(int e) const { return a_out(2 * e); }
  cplx coefficient_B(int e) const { return a_in(2 * e + 1); }
};

// Builds a representation from per-edge coefficients (A_e, B_e), stacked as 2E entries.
EigenfunctionRep rep_from_edge_coefficients(const MetricGraph& g, double k,
                                            const CVector& coefficients);

cplx evaluate(const MetricGraph& g, const EigenfunctionRep& f, int edge, double x);
// f at the origin of directed edge d, and its derivative along d.
cplx value_at_origin(const MetricGraph& g, const EigenfunctionRep& f, int d);
cplx outgoing_derivative(const MetricGraph& g, const EigenfunctionRep& f, int d);
// Sum of outgoing derivatives at v.
cplx derivative_sum(const MetricGraph& g, const EigenfunctionRep& f, int v);
double l2_norm_squared(const MetricGraph& g, const EigenfunctionRep& f);

struct EigenfunctionResiduals {
  double kernel = 0.0;      // |(I - U) a_in|
  double continuity = 0.0;  // max spread of vertex values over incident edges
  double vertex = 0.0;      // max |alpha f - sum f'| over delta vertices, |f| at Dirichlet
};

EigenfunctionResiduals residuals(const MetricGraph& g, const EigenfunctionRep& f);

// L2-orthonormal, real-valued basis of the eigenspace at `point`. Throws
// NumericalError if the kernel dimension differs from point.multiplicity.
std::vector<EigenfunctionRep> eigenfunction(const MetricGraph& g, const SpectralPoint& point);

struct QuadraticFormEval {
  double dirichlet_energy = 0.0;
  double vertex_energy = 0.0;
  double total = 0.0;
};

QuadraticFormEval quadratic_form(const MetricGraph& g, const EigenfunctionRep& f);

}  // namespace qgraph
