#include <algorithm>
#include <cmath>

#include "qgraph/errors.hpp"
#include "qgraph/secular.hpp"

namespace qgraph {

namespace {

const cplx kI(0.0, 1.0);

// \int_0^l e^{2ikx} dx
cplx oscillating_integral(double k, double l) {
  if (k == 0.0) return l;
  return (std::exp(2.0 * kI * k * l) - 1.0) / (2.0 * kI * k);
}

// L2 inner product <f, g> of two edge-coefficient vectors (A_e, B_e stacked).
cplx inner(const MetricGraph& g, double k, const CVector& f, const CVector& h) {
  cplx s = 0.0;
  for (int e = 0; e < g.edge_count(); ++e) {
    const double l = g.edge(e).length;
    const cplx i_int = oscillating_integral(k, l);
    const cplx a1 = f(2 * e), b1 = f(2 * e + 1);
    const cplx a2 = h(2 * e), b2 = h(2 * e + 1);
    s += (a1 * std::conj(a2) + b1 * std::conj(b2)) * l + a1 * std::conj(b2) * i_int +
         b1 * std::conj(a2) * std::conj(i_int);
  }
  return s;
}

CVector edge_coefficients_from_kernel(const MetricGraph& g, const CMatrix& s, const CVector& b) {
  const CVector out = s * b;
  CVector c(2 * g.edge_count());
  for (int e = 0; e < g.edge_count(); ++e) {
    c(2 * e) = out(2 * e);
    c(2 * e + 1) = b(2 * e + 1);
  }
  return c;
}

}  // namespace

EigenfunctionRep rep_from_edge_coefficients(const MetricGraph& g, double k,
                                            const CVector& coefficients) {
  EigenfunctionRep r;
  r.k = k;
  const int n = g.directed_count();
  r.a_in = CVector::Zero(n);
  r.a_out = CVector::Zero(n);
  for (int e = 0; e < g.edge_count(); ++e) {
    const cplx ph = std::exp(kI * k * g.edge(e).length);
    const cplx a = coefficients(2 * e);
    const cplx b = coefficients(2 * e + 1);
    r.a_out(2 * e) = a;
    r.a_in(2 * e) = a * ph;
    r.a_in(2 * e + 1) = b;
    r.a_out(2 * e + 1) = b / ph;
  }
  r.vertex_values = CVector::Zero(g.vertex_count());
  for (int v = 0; v < g.vertex_count(); ++v) {
    r.vertex_values(v) = value_at_origin(g, r, g.outgoing(v).front());
  }
  return r;
}

cplx evaluate(const MetricGraph& g, const EigenfunctionRep& f, int edge, double x) {
  (void)g;
  return f.coefficient_A(edge) * std::exp(kI * f.k * x) +
         f.coefficient_B(edge) * std::exp(-kI * f.k * x);
}

cplx value_at_origin(const MetricGraph&, const EigenfunctionRep& f, int d) {
  return f.a_out(d) + f.a_in(reverse(d));
}

cplx outgoing_derivative(const MetricGraph&, const EigenfunctionRep& f, int d) {
  return kI * f.k * (f.a_out(d) - f.a_in(reverse(d)));
}

cplx derivative_sum(const MetricGraph& g, const EigenfunctionRep& f, int v) {
  cplx s = 0.0;
  for (int d : g.outgoing(v)) s += outgoing_derivative(g, f, d);
  return s;
}

double l2_norm_squared(const MetricGraph& g, const EigenfunctionRep& f) {
  CVector c(2 * g.edge_count());
  for (int e = 0; e < g.edge_count(); ++e) {
    c(2 * e) = f.coefficient_A(e);
    c(2 * e + 1) = f.coefficient_B(e);
  }
  return inner(g, f.k, c, c).real();
}

EigenfunctionResiduals residuals(const MetricGraph& g, const EigenfunctionRep& f) {
  EigenfunctionResiduals r;
  const int n = g.directed_count();
  const CMatrix a = CMatrix::Identity(n, n) - quantum_evolution(g, f.k);
  r.kernel = (a * f.a_in).norm();
  for (int v = 0; v < g.vertex_count(); ++v) {
    const cplx fv = f.vertex_values(v);
    for (int d : g.outgoing(v)) {
      r.continuity = std::max(r.continuity, std::abs(value_at_origin(g, f, d) - fv));
    }
    const auto& c = g.condition(v);
    const double res = c.is_dirichlet() ? std::abs(fv)
                                        : std::abs(c.coupling() * fv - derivative_sum(g, f, v));
    r.vertex = std::max(r.vertex, res);
  }
  return r;
}

std::vector<EigenfunctionRep> eigenfunction(const MetricGraph& g, const SpectralPoint& point) {
  const double k = point.k;
  const int n = g.directed_count();
  const auto q = quantum_map(g, k);
  const CMatrix a = CMatrix::Identity(n, n) - q.U;
  Eigen::JacobiSVD<CMatrix> svd(a, Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  const double cut = 1e-8 * std::max(1.0, s(0));
  int dim = 0;
  for (int i = 0; i < s.size(); ++i) dim += s(i) < cut ? 1 : 0;
  if (dim != point.multiplicity) {
    throw NumericalError("kernel dimension " + std::to_string(dim) + " at k = " +
                         std::to_string(k) + " differs from multiplicity " +
                         std::to_string(point.multiplicity));
  }

  // Real and imaginary parts of every kernel function span the same real space.
  // conj(A e^{ikx} + B e^{-ikx}) has coefficients (conj B, conj A).
  std::vector<CVector> candidates;
  for (int j = n - dim; j < n; ++j) {
    const CVector c = edge_coefficients_from_kernel(g, q.S, svd.matrixV().col(j));
    CVector conj_c(c.size());
    for (int e = 0; e < g.edge_count(); ++e) {
      conj_c(2 * e) = std::conj(c(2 * e + 1));
      conj_c(2 * e + 1) = std::conj(c(2 * e));
    }
    candidates.push_back(0.5 * (c + conj_c));
    candidates.push_back(cplx(0.0, -0.5) * (c - conj_c));
  }
  // Larger candidates first keeps Gram-Schmidt well conditioned.
  std::stable_sort(candidates.begin(), candidates.end(), [&](const CVector& x, const CVector& y) {
    return inner(g, k, x, x).real() > inner(g, k, y, y).real();
  });

  std::vector<CVector> basis;
  for (const auto& c : candidates) {
    if (static_cast<int>(basis.size()) == dim) break;
    CVector v = c;
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& b : basis) v -= inner(g, k, v, b) * b;
    }
    const double nn = std::sqrt(std::max(0.0, inner(g, k, v, v).real()));
    if (nn < 1e-6 * std::sqrt(std::max(1e-300, inner(g, k, c, c).real()))) continue;
    basis.push_back(v / nn);
  }
  if (static_cast<int>(basis.size()) != dim) {
    throw NumericalError("could not build a real eigenfunction basis at k = " +
                         std::to_string(k));
  }
  std::vector<EigenfunctionRep> out;
  for (const auto& b : basis) out.push_back(rep_from_edge_coefficients(g, k, b));
  return out;
}

QuadraticFormEval quadratic_form(const MetricGraph& g, const EigenfunctionRep& f) {
  QuadraticFormEval q;
  const double k = f.k;
  for (int e = 0; e < g.edge_count(); ++e) {
    const double l = g.edge(e).length;
    const cplx a = f.coefficient_A(e);
    const cplx b = f.coefficient_B(e);
    const cplx i_int = oscillating_integral(k, l);
    q.dirichlet_energy +=
        k * k * ((std::norm(a) + std::norm(b)) * l - 2.0 * (a * std::conj(b) * i_int).real());
  }
  for (int v = 0; v < g.vertex_count(); ++v) {
    const auto& c = g.condition(v);
    if (c.is_dirichlet()) continue;
    q.vertex_energy += c.coupling() * std::norm(f.vertex_values(v));
  }
  q.total = q.dirichlet_energy + q.vertex_energy;
  return q;
}

}  // namespace qgraph
