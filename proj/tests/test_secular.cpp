#include <gtest/gtest.h>

#include <random>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "qgraph/errors.hpp"
#include "qgraph/secular.hpp"

using namespace qgraph;
using namespace qgraph::test;

namespace {

std::vector<double> first_roots(const MetricGraph& g, SecularMethod m, std::size_t n,
                                double k_max) {
  auto r = secular_roots(g, k_max, 1e-13, m);
  if (r.size() > n) r.resize(n);
  return r;
}

void expect_same_roots(const std::vector<double>& a, const std::vector<double>& b, double tol) {
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_NEAR(a[i], b[i], tol) << "root " << i;
}

}  // namespace

TEST(SecularDet, IntervalValues) {
  const auto g = make_interval(pi);
  EXPECT_LT(std::abs(secular_det(g, 1.0)), 1e-14);
  EXPECT_GT(std::abs(secular_det(make_interval(1.0), 1.5)), 0.1);
}

TEST(SecularDet, CircleDoubleRoot) {
  const auto g = make_circle(1.0);
  EXPECT_LT(std::abs(secular_det(g, 2.0 * pi)), 1e-14);
  const int n = g.directed_count();
  EXPECT_EQ(kernel_dim(CMatrix::Identity(n, n) - quantum_evolution(g, 2.0 * pi)), 2);
}

TEST(SecularReal, CircleClosedForm) {
  const auto g = make_circle(1.0);
  for (double k = 0.1; k < 20.0; k += 0.37) {
    EXPECT_NEAR(secular_real(g, k), -4.0 * std::sin(k / 2.0) * std::sin(k / 2.0), 1e-12);
  }
}

TEST(SecularReal, RealOnEveryFixture) {
  std::vector<MetricGraph> graphs = {three_star(), tetrahedron(), generic_tetrahedron(), tree(),
                                     make_delta_interval(1.0, std::sqrt(2.0), 2.0),
                                     make_delta_interval(0.5, 0.5, -4.0), two_circles()};
  graphs.push_back(generic_tetrahedron().with_condition(1, VertexCondition::delta(-3.5)));
  graphs.push_back(generic_tetrahedron().with_condition(2, VertexCondition::dirichlet()));
  for (const auto& g : graphs) {
    for (double k = 0.013; k < 30.0; k += 0.0917) EXPECT_NO_THROW(secular_real(g, k));
  }
}

TEST(SecularReal, IntervalZerosAtMultiplesOfPi) {
  const auto g = make_interval(1.0);
  for (int n = 1; n < 6; ++n) {
    EXPECT_NEAR(secular_real(g, n * pi), 0.0, 1e-12);
    EXPECT_LT(secular_real(g, n * pi - 0.1) * secular_real(g, n * pi + 0.1), 0.0);
  }
}

TEST(SecularStarCot, SymmetricInterval) {
  const auto g = make_delta_interval(0.5, 0.5, 0.0);
  EXPECT_NEAR(secular_star_cot(g, pi), 0.0, 1e-14);
}

TEST(SecularStarCot, PoleIsReported) {
  const auto g = make_delta_interval(0.5, 0.5, 0.0);
  EXPECT_THROW(secular_star_cot(g, 2.0 * pi), NumericalError);
  EXPECT_THROW(secular_star_cot(tetrahedron(), 1.0), GraphError);
}

TEST(SecularStarCot, ThreeStarFirstZeroMatchesDet) {
  const auto g = make_star({1.0, 0.5, 1.0 / 3.0}, VertexCondition::neumann());
  const auto cot = first_roots(g, SecularMethod::Star, 1, 10.0);
  const auto det = first_roots(g, SecularMethod::Det, 1, 10.0);
  ASSERT_EQ(cot.size(), 1u);
  ASSERT_EQ(det.size(), 1u);
  EXPECT_NEAR(cot[0], det[0], 1e-10);
}

TEST(SecularStarCot, DeltaIntervalMatchesFiniteDifferences) {
  const double l2 = std::sqrt(2.0);
  const auto g = make_delta_interval(1.0, l2, 2.0);
  const auto roots = first_roots(g, SecularMethod::Star, 5, 20.0);
  const DeltaIntervalFD fd(1.0, l2, 2.0);
  ASSERT_EQ(roots.size(), 5u);
  for (int n = 0; n < 5; ++n) {
    const double k_fd = std::sqrt(fd.eigenvalue(n));
    EXPECT_NEAR(roots[n], k_fd, 1e-5 * k_fd);
  }
}

TEST(SecularVertex, ReproducesIntervalFormula) {
  const double l1 = 0.8, l2 = 1.3, alpha = 1.7;
  const auto g = make_delta_interval(l1, l2, alpha);
  for (double k = 0.05; k < 15.0; k += 0.113) {
    const double expect = (alpha + k / std::tan(k * l1) + k / std::tan(k * l2)) *
                          std::sin(k * l1) * std::sin(k * l2);
    EXPECT_NEAR(secular_vertex(g, k), expect, 1e-10 * std::max(1.0, std::abs(expect)));
  }
}

TEST(SecularVertex, RejectsLoops) {
  EXPECT_THROW(secular_vertex(make_circle(1.0), 1.0), GraphError);
}

TEST(SecularVertex, DoublePolesAreEigenvalues) {
  // l1 = 1, l2 = 2: k = m pi is a pole of both cotangents, k = (m + 1/2) pi of one only.
  const auto g = make_delta_interval(1.0, 2.0, 1.0);
  EXPECT_NEAR(secular_vertex(g, pi), 0.0, 1e-12);
  EXPECT_NEAR(secular_vertex(g, 2.0 * pi), 0.0, 1e-12);
  EXPECT_GT(std::abs(secular_vertex(g, 0.5 * pi)), 1e-3);
  EXPECT_GT(std::abs(secular_vertex(g, 1.5 * pi)), 1e-3);
  const auto s = eigenvalues(g, 7.0);
  auto has = [&](double k) {
    return std::any_of(s.points.begin(), s.points.end(),
                       [&](const SpectralPoint& p) { return std::abs(p.k - k) < 1e-9; });
  };
  EXPECT_TRUE(has(pi));
  EXPECT_TRUE(has(2.0 * pi));
  EXPECT_FALSE(has(0.5 * pi));
  EXPECT_FALSE(has(1.5 * pi));
  // pi is the n-th finite-difference eigenvalue for the matching n
  const DeltaIntervalFD fd(1.0, 2.0, 1.0);
  int below = 0;
  for (const auto& p : s.points) below += p.k < pi - 1e-6 ? p.multiplicity : 0;
  EXPECT_NEAR(std::sqrt(fd.eigenvalue(below)), pi, 1e-5);
}

TEST(Eigenvalues, DirichletIntervalFiftyRoots) {
  const auto s = eigenvalues(make_interval(1.0), 50.5 * pi);
  ASSERT_EQ(s.points.size(), 50u);
  for (int n = 0; n < 50; ++n) {
    EXPECT_NEAR(s.points[n].k, (n + 1) * pi, 1e-10);
    EXPECT_EQ(s.points[n].multiplicity, 1);
  }
  EXPECT_EQ(s.zero_multiplicity, 0);
}

TEST(Eigenvalues, CircleDoubleRoots) {
  const auto s = eigenvalues(make_circle(1.0), 20.0);
  ASSERT_EQ(s.points.size(), 3u);
  for (int n = 0; n < 3; ++n) {
    EXPECT_NEAR(s.points[n].k, 2.0 * pi * (n + 1), 1e-10);
    EXPECT_EQ(s.points[n].multiplicity, 2);
  }
  EXPECT_EQ(s.zero_multiplicity, 1);
}

TEST(Eigenvalues, OddStatesIgnoreCoupling) {
  for (double alpha : {-1.0, 0.0, 5.0, 40.0}) {
    const auto s = eigenvalues(make_delta_interval(0.5, 0.5, alpha), 13.0);
    for (int n = 1; n <= 2; ++n) {
      EXPECT_TRUE(std::any_of(s.points.begin(), s.points.end(), [&](const SpectralPoint& p) {
        return std::abs(p.k - 2.0 * pi * n) < 1e-10;
      })) << "alpha " << alpha;
    }
  }
}

TEST(Eigenvalues, IncommensurateStarIsSimple) {
  for (double alpha : {-2.0, 0.0, 3.0}) {
    const auto s = eigenvalues(make_delta_interval(1.0, std::sqrt(2.0), alpha), 30.0);
    for (const auto& p : s.points) EXPECT_EQ(p.multiplicity, 1);
  }
}

TEST(Eigenvalues, CrossMethodAgreement) {
  const auto star = three_star();
  const auto r_det = first_roots(star, SecularMethod::Det, 20, 40.0);
  ASSERT_EQ(r_det.size(), 20u);
  expect_same_roots(r_det, first_roots(star, SecularMethod::Real, 20, 40.0), 1e-9);
  expect_same_roots(r_det, first_roots(star, SecularMethod::Vertex, 20, 40.0), 1e-9);

  const auto dint = make_delta_interval(1.0, std::sqrt(2.0), 2.0);
  const auto d_det = first_roots(dint, SecularMethod::Det, 20, 40.0);
  ASSERT_EQ(d_det.size(), 20u);
  expect_same_roots(d_det, first_roots(dint, SecularMethod::Real, 20, 40.0), 1e-9);
  expect_same_roots(d_det, first_roots(dint, SecularMethod::Vertex, 20, 40.0), 1e-9);
  expect_same_roots(d_det, first_roots(dint, SecularMethod::Star, 20, 40.0), 1e-9);
}

TEST(Eigenvalues, NoRootNearCotangentPoles) {
  const double l1 = 1.0, l2 = std::sqrt(2.0);
  const auto s = eigenvalues(make_delta_interval(l1, l2, 1.0), 60.0);
  for (const auto& p : s.points) {
    for (double l : {l1, l2}) {
      const double m = std::round(p.k * l / pi);
      EXPECT_GT(std::abs(p.k - m * pi / l), 1e-6);
    }
  }
}

TEST(Eigenvalues, SmoothingInvariance) {
  GraphDescription d;
  d.vertices = {{"o", {}}, {"a", VertexCondition::dirichlet()}, {"m", {}},
                {"b", VertexCondition::delta(1.5)}, {"c", {}}};
  d.edges = {{"o", "a", 1.0, std::nullopt},
             {"o", "m", 0.4, std::nullopt},
             {"m", "b", std::sqrt(0.5), std::nullopt},
             {"o", "c", std::sqrt(3.0) / 2.0, std::nullopt}};
  const auto g = build_graph(d);
  const auto sm = smooth_degree2_neumann(g).graph;
  ASSERT_LT(sm.vertex_count(), g.vertex_count());
  const auto a = secular_roots(g, 40.0, 1e-13, SecularMethod::Real);
  const auto b = secular_roots(sm, 40.0, 1e-13, SecularMethod::Real);
  ASSERT_GE(a.size(), 20u);
  ASSERT_GE(b.size(), 20u);
  for (int i = 0; i < 20; ++i) EXPECT_NEAR(a[i], b[i], 1e-9);
}

TEST(Eigenvalues, MultiplicityMatchesSignChangesPlusTangential) {
  // Tetrahedron: every root has a kernel; odd multiplicities flip the sign of the real form.
  const auto g = tetrahedron();
  const auto s = eigenvalues(g, 12.0);
  for (const auto& p : s.points) {
    const double before = secular_real(g, p.k - 1e-4);
    const double after = secular_real(g, p.k + 1e-4);
    EXPECT_EQ(before * after < 0.0, p.multiplicity % 2 == 1) << p.k;
  }
}

TEST(Eigenvalues, WeylEnvelope) {
  for (const auto& g : {tetrahedron(), generic_tetrahedron(), three_star(), tree()}) {
    const auto s = eigenvalues(g, 40.0);
    const double L = g.total_length();
    for (double k = 0.5; k <= 40.0; k += 0.5) {
      EXPECT_LE(std::abs(s.count_below(k) - L * k / pi), 2.0 * g.edge_count() + 2.0);
    }
  }
}

TEST(NegativeEigenvalues, IntervalThreshold) {
  EXPECT_EQ(negative_eigenvalues(make_delta_interval(1.0, 1.0, -3.0)).size(), 1u);
  EXPECT_TRUE(negative_eigenvalues(make_delta_interval(1.0, 1.0, -1.0)).empty());
  EXPECT_TRUE(negative_eigenvalues(make_delta_interval(1.0, 1.0, -1.999)).empty());
  EXPECT_EQ(negative_eigenvalues(make_delta_interval(1.0, 1.0, -2.001)).size(), 1u);
  EXPECT_TRUE(negative_eigenvalues(make_delta_interval(1.0, 1.0, 4.0)).empty());
}

TEST(NegativeEigenvalues, RootOfHyperbolicSecular) {
  const auto kap = negative_eigenvalues(make_delta_interval(1.0, 1.0, -3.0));
  ASSERT_EQ(kap.size(), 1u);
  const double k = kap[0];
  EXPECT_NEAR(-3.0 + 2.0 * k / std::tanh(k), 0.0, 1e-10);
  const DeltaIntervalFD fd(1.0, 1.0, -3.0);
  EXPECT_NEAR(fd.eigenvalue(0), -k * k, 1e-4 * k * k);
}

TEST(NegativeEigenvalues, SeveralCouplings) {
  // Two strongly attractive vertices on a Neumann path bind two states.
  GraphDescription d;
  d.vertices = {{"a", {}}, {"b", VertexCondition::delta(-8.0)}, {"c", VertexCondition::delta(-8.0)},
                {"e", {}}};
  d.edges = {{"a", "b", 1.0, std::nullopt}, {"b", "c", 2.0, std::nullopt},
             {"c", "e", 1.0, std::nullopt}};
  EXPECT_EQ(negative_eigenvalues(build_graph(d)).size(), 2u);
}

TEST(Eigenfunction, DirichletIntervalGroundState) {
  const auto g = make_interval(1.0);
  const auto fs = eigenfunction(g, {pi, 1, pi * pi});
  ASSERT_EQ(fs.size(), 1u);
  const auto& f = fs[0];
  EXPECT_NEAR(l2_norm_squared(g, f), 1.0, 1e-12);
  for (double x : {0.1, 0.25, 0.5, 0.9}) {
    EXPECT_NEAR(std::abs(evaluate(g, f, 0, x)), std::sqrt(2.0) * std::sin(pi * x), 1e-10);
  }
  EXPECT_LT(std::abs(f.vertex_values(0)), 1e-10);
  EXPECT_LT(std::abs(f.vertex_values(1)), 1e-10);
  EXPECT_NEAR(quadratic_form(g, f).total, pi * pi, 1e-9);
}

TEST(Eigenfunction, CircleTwoDimensional) {
  const auto g = make_circle(1.0);
  const double k = 2.0 * pi;
  const auto fs = eigenfunction(g, {k, 2, k * k});
  ASSERT_EQ(fs.size(), 2u);
  for (const auto& f : fs) {
    EXPECT_NEAR(l2_norm_squared(g, f), 1.0, 1e-12);
    EXPECT_NEAR(quadratic_form(g, f).total, k * k, 1e-8);
    const auto r = residuals(g, f);
    EXPECT_LT(r.kernel, 1e-8);
    EXPECT_LT(r.continuity, 1e-8);
  }
  EXPECT_THROW(eigenfunction(g, {k, 1, k * k}), NumericalError);
}

TEST(Eigenfunction, DeltaJumpCondition) {
  const auto g = make_delta_interval(0.5, 0.5, 5.0);
  const auto s = eigenvalues(g, 5.0);
  ASSERT_FALSE(s.points.empty());
  const auto f = eigenfunction(g, s.points[0]).at(0);
  const auto r = residuals(g, f);
  EXPECT_LT(r.continuity, 1e-8);
  EXPECT_LT(r.vertex, 1e-6);
  EXPECT_GT(std::abs(f.vertex_values(1)), 1e-3);
  EXPECT_NEAR(quadratic_form(g, f).total, s.points[0].eigenvalue, 1e-6);
}

TEST(Eigenfunction, ResidualsOnFixtures) {
  std::vector<MetricGraph> graphs = {three_star(), tetrahedron(), generic_tetrahedron(), tree(),
                                     make_delta_interval(1.0, std::sqrt(2.0), -1.0)};
  graphs.push_back(generic_tetrahedron().with_condition(0, VertexCondition::delta(2.5)));
  for (const auto& g : graphs) {
    const auto s = eigenvalues(g, 15.0);
    for (const auto& p : s.points) {
      for (const auto& f : eigenfunction(g, p)) {
        const auto r = residuals(g, f);
        EXPECT_LT(r.kernel, 1e-8);
        EXPECT_LT(r.continuity, 1e-8);
        EXPECT_LT(r.vertex, 1e-6);
        EXPECT_NEAR(l2_norm_squared(g, f), 1.0, 1e-10);
        EXPECT_NEAR(quadratic_form(g, f).total, p.eigenvalue, 1e-6 * std::max(1.0, p.eigenvalue));
        // real basis: the function is real up to a global phase
        const cplx v = evaluate(g, f, 0, 0.3 * g.edge(0).length);
        const cplx w = evaluate(g, f, g.edge_count() - 1, 0.6 * g.edge(g.edge_count() - 1).length);
        EXPECT_LT(std::abs(v.imag()) + std::abs(w.imag()), 1e-8);
      }
    }
  }
}

TEST(QuadraticForm, NonNegativeForPositiveCouplings) {
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_real_distribution<double> kk(0.1, 10.0);
  auto g = generic_tetrahedron().with_condition(0, VertexCondition::delta(2.0));
  g = g.with_condition(1, VertexCondition::dirichlet());
  for (int trial = 0; trial < 100; ++trial) {
    // continuous member of the form domain: A e^{ikx} + B e^{-ikx} through random vertex values
    const double k = kk(rng);
    std::vector<cplx> fv(g.vertex_count());
    for (int v = 0; v < g.vertex_count(); ++v) {
      fv[v] = g.condition(v).is_dirichlet() ? cplx(0.0) : cplx(u(rng), u(rng));
    }
    CVector c(2 * g.edge_count());
    for (int e = 0; e < g.edge_count(); ++e) {
      const auto& ed = g.edge(e);
      const cplx p = std::exp(cplx(0.0, k * ed.length));
      // A + B = f_a, A p + B / p = f_b
      const cplx b = (fv[ed.a] * p - fv[ed.b]) / (p - 1.0 / p);
      c(2 * e) = fv[ed.a] - b;
      c(2 * e + 1) = b;
    }
    const auto rep = rep_from_edge_coefficients(g, k, c);
    EXPECT_LT(residuals(g, rep).continuity, 1e-9);
    EXPECT_GE(quadratic_form(g, rep).total, 0.0);
  }
}

TEST(RootScan, ClosePairsOnGenericTetrahedron) {
  const auto g = generic_tetrahedron();
  const auto real = secular_roots(g, 12.0, 1e-12, SecularMethod::Real);
  const auto det = secular_roots(g, 12.0, 1e-12, SecularMethod::Det);
  const auto vertex = secular_roots(g, 12.0, 1e-12, SecularMethod::Vertex);
  ASSERT_EQ(real.size(), det.size());
  ASSERT_EQ(real.size(), vertex.size());
  for (std::size_t i = 0; i < real.size(); ++i) {
    EXPECT_NEAR(real[i], det[i], 1e-9);
    EXPECT_NEAR(real[i], vertex[i], 1e-9);
  }
  // 6.6275 and 6.6628 sit within one coarse grid cell
  int near = 0;
  for (double r : real) near += r > 6.6 && r < 6.7;
  EXPECT_EQ(near, 2);
}

TEST(RootScan, ThreeRootsInOneCellOnDecoupledStar) {
  // With a Dirichlet centre the star splits into Dirichlet intervals; 9.783, 9.866 and 9.904
  // share one cell of the coarse grid.
  const std::vector<double> ls = {1.273623633819017, 1.5859724404349744, 0.64226598505890187};
  const auto s = eigenvalues(make_star(ls, VertexCondition::dirichlet()), 12.0);
  std::vector<double> expected;
  for (double l : ls) {
    for (int m = 1; m * pi / l <= 12.0; ++m) expected.push_back(m * pi / l);
  }
  std::sort(expected.begin(), expected.end());
  ASSERT_EQ(s.points.size(), expected.size());
  for (std::size_t i = 0; i < expected.size(); ++i) {
    EXPECT_NEAR(s.points[i].k, expected[i], 1e-10);
    EXPECT_EQ(s.points[i].multiplicity, 1);
  }
}
