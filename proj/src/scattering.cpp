#include "qgraph/scattering.hpp"

#include "qgraph/errors.hpp"

namespace qgraph {

CMatrix vertex_scattering_matrix(const VertexCondition& cond, int degree, cplx k) {
  if (degree < 1) throw GraphError("vertex scattering needs degree >= 1");
  const CMatrix id = CMatrix::Identity(degree, degree);
  if (cond.is_dirichlet()) return -id;
  cplx c;
  if (cond.is_neumann_like()) {
    c = 2.0 / static_cast<double>(degree);
  } else {
    if (k == cplx(0.0)) throw GraphError("vertex scattering with nonzero coupling at k = 0");
    c = 2.0 / (static_cast<double>(degree) + cplx(0.0, 1.0) * cond.alpha / k);
  }
  return CMatrix::Constant(degree, degree, c) - id;
}

VertexScattering vertex_scattering(const MetricGraph& g, int v, cplx k) {
  return {v, vertex_scattering_matrix(g.condition(v), g.degree(v), k), k};
}

CMatrix big_S(const MetricGraph& g, cplx k) {
  const int n = g.directed_count();
  CMatrix s = CMatrix::Zero(n, n);
  for (int v = 0; v < g.vertex_count(); ++v) {
    const auto& out = g.outgoing(v);
    const CMatrix sigma = vertex_scattering_matrix(g.condition(v), g.degree(v), k);
    for (std::size_t j = 0; j < out.size(); ++j) {
      for (std::size_t jp = 0; jp < out.size(); ++jp) {
        s(out[j], reverse(out[jp])) = sigma(j, jp);
      }
    }
  }
  return s;
}

QuantumMap quantum_map(const MetricGraph& g, cplx k) {
  QuantumMap q;
  q.k = k;
  q.S = big_S(g, k);
  const int n = g.directed_count();
  q.T = CMatrix::Zero(n, n);
  for (int d = 0; d < n; ++d) q.T(d, d) = std::exp(cplx(0.0, 1.0) * k * g.directed_length(d));
  // T is diagonal: scale rows instead of a dense product.
  q.U = q.S;
  for (int d = 0; d < n; ++d) q.U.row(d) *= q.T(d, d);
  return q;
}

CMatrix quantum_evolution(const MetricGraph& g, cplx k) {
  CMatrix u = big_S(g, k);
  for (int d = 0; d < g.directed_count(); ++d) {
    u.row(d) *= std::exp(cplx(0.0, 1.0) * k * g.directed_length(d));
  }
  return u;
}

int star_centre(const MetricGraph& star) {
  const int e = star.edge_count();
  if (star.vertex_count() != e + 1 || e < 1 || star.has_loops()) {
    throw GraphError("not a star graph");
  }
  int centre = -1;
  for (int v = 0; v < star.vertex_count(); ++v) {
    if (star.degree(v) == e && (e > 1 || !star.condition(v).is_dirichlet())) {
      if (centre < 0) centre = v;
    }
  }
  if (centre < 0) throw GraphError("not a star graph");
  for (int v = 0; v < star.vertex_count(); ++v) {
    if (v == centre) continue;
    if (star.degree(v) != 1) throw GraphError("not a star graph");
  }
  return centre;
}

CMatrix star_reduced_map(const MetricGraph& star, cplx k) {
  const int c = star_centre(star);
  if (star.condition(c).kind != VertexKind::Neumann && !star.condition(c).is_neumann_like()) {
    throw GraphError("star reduction needs a Neumann centre");
  }
  for (int v = 0; v < star.vertex_count(); ++v) {
    if (v != c && !star.condition(v).is_dirichlet()) {
      throw GraphError("star reduction needs Dirichlet leaves");
    }
  }
  const int e = star.edge_count();
  // Slot j at the centre is edge edge_of(outgoing[j]); outgoing is sorted so slot j is edge j.
  const CMatrix sigma = vertex_scattering_matrix(star.condition(c), e, k);
  CMatrix m = CMatrix::Identity(e, e);
  for (int i = 0; i < e; ++i) {
    const cplx t = std::exp(cplx(0.0, 2.0) * k * star.edge(i).length);
    m.row(i) += t * sigma.row(i);
  }
  return m;
}

double unitarity_defect(const CMatrix& a) {
  return (a.adjoint() * a - CMatrix::Identity(a.cols(), a.cols())).cwiseAbs().maxCoeff();
}

}  // namespace qgraph
