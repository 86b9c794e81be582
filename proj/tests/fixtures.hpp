#pragma once

#include <cmath>
#include <numbers>
#include <vector>

#include "qgraph/builders.hpp"
#include "qgraph/graph.hpp"

namespace qgraph::test {

inline constexpr double pi = std::numbers::pi;

// Star with Neumann centre and leaves Neumann, Dirichlet, Dirichlet; lengths 1, 1/2, 1/3.
inline MetricGraph three_star() {
  GraphDescription d;
  d.vertices = {{"0", VertexCondition::neumann()},
                {"1", VertexCondition::neumann()},
                {"2", VertexCondition::dirichlet()},
                {"3", VertexCondition::dirichlet()}};
  d.edges = {{"0", "1", 1.0, Rational(1)},
             {"0", "2", 0.5, Rational(1, 2)},
             {"0", "3", 1.0 / 3.0, Rational(1, 3)}};
  return build_graph(d);
}

inline MetricGraph neumann_interval(double l) {
  return make_interval(l, VertexCondition::neumann(), VertexCondition::neumann());
}

inline MetricGraph tetrahedron() { return make_complete(4, 1.0); }

// Tetrahedron with pairwise different lengths.
inline MetricGraph generic_tetrahedron() {
  GraphDescription d;
  for (int i = 0; i < 4; ++i) d.vertices.push_back({"t" + std::to_string(i), {}});
  const double ls[] = {1.0, std::sqrt(2.0), std::sqrt(3.0) - 0.5, std::numbers::e / 2.0,
                       std::numbers::pi / 3.0, std::sqrt(5.0) / 2.0};
  int n = 0;
  for (int i = 0; i < 4; ++i) {
    for (int j = i + 1; j < 4; ++j) {
      d.edges.push_back({"t" + std::to_string(i), "t" + std::to_string(j), ls[n++], std::nullopt});
    }
  }
  return build_graph(d);
}

// Neumann tree: star with three leaves and one extra edge hanging off a leaf.
inline MetricGraph tree() {
  GraphDescription d;
  for (const char* n : {"o", "a", "b", "c", "d"}) d.vertices.push_back({n, {}});
  d.edges = {{"o", "a", 1.0, std::nullopt},
             {"o", "b", std::sqrt(2.0), std::nullopt},
             {"o", "c", std::sqrt(3.0) / 2.0, std::nullopt},
             {"c", "d", std::numbers::pi / 4.0, std::nullopt}};
  return build_graph(d);
}

inline MetricGraph two_circles() { return disjoint_union(make_circle(1.0), make_circle(std::sqrt(2.0))); }

}  // namespace qgraph::test
