#pragma once

#include <complex>

#include <Eigen/Dense>

#include "qgraph/graph.hpp"

namespace qgraph {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

struct VertexScattering {
  int vertex = -1;
  CMatrix matrix;  // degree x degree, slot order = MetricGraph::outgoing(vertex)
  cplx k;
};

// sigma = -I + 2/(d + i alpha/k) * ones. Dirichlet gives exactly -I.
// Throws GraphError for k = 0 with a nonzero coupling or degree < 1.
CMatrix vertex_scattering_matrix(const VertexCondition& cond, int degree, cplx k);
VertexScattering vertex_scattering(const MetricGraph& g, int v, cplx k);

// Bond scattering matrix in the (2e, 2e+1) directed-edge basis:
// S(out_j, reverse(out_j')) = sigma_{j j'} with out_j the j-th outgoing edge of the vertex.
CMatrix big_S(const MetricGraph& g, cplx k);

struct QuantumMap {
  CMatrix S;
  CMatrix T;  // diagonal exp(i k l)
  CMatrix U;  // T * S
  cplx k;
};

QuantumMap quantum_map(const MetricGraph& g, cplx k);

// Convenience: U(k) only.
CMatrix quantum_evolution(const MetricGraph& g, cplx k);

// I_E + T(2k) sigma0 for a star with Neumann centre and Dirichlet leaves.
// Edge order is the graph's edge order.
CMatrix star_reduced_map(const MetricGraph& star, cplx k);

// Centre vertex of a star with Neumann centre and Dirichlet leaves; throws otherwise.
int star_centre(const MetricGraph& star);

// max |(A*A - I)_{ij}|
double unitarity_defect(const CMatrix& a);

}  // namespace qgraph
