#pragma once

#include <vector>

#include "qgraph/graph.hpp"

namespace qgraph {

// Single edge [0, l] between vertices "a" and "b".
MetricGraph make_interval(double l, VertexCondition left = VertexCondition::dirichlet(),
                          VertexCondition right = VertexCondition::dirichlet());

// [-l1, 0] and [0, l2] joined at "o" with a delta(alpha) vertex; Dirichlet ends "a", "b".
MetricGraph make_delta_interval(double l1, double l2, double alpha);

// Centre "o" joined to leaves "v1".."vE"; edge i has lengths[i].
MetricGraph make_star(const std::vector<double>& lengths, VertexCondition centre,
                      VertexCondition leaf = VertexCondition::dirichlet());

// One loop of length l at a Neumann vertex.
MetricGraph make_circle(double l);

// n-cycle with n Neumann vertices and equal edge lengths.
MetricGraph make_cycle(int n, double l);

// Path of Neumann vertices with the given edge lengths; exact lengths when given.
MetricGraph make_path(const std::vector<Rational>& lengths);
MetricGraph make_path(const std::vector<double>& lengths);

// Complete graph K_n with Neumann vertices and equal lengths.
MetricGraph make_complete(int n, double l);

// Vertices of b are renamed with a "'" suffix.
MetricGraph disjoint_union(const MetricGraph& a, const MetricGraph& b);

}  // namespace qgraph
