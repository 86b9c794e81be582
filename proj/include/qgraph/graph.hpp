#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qgraph/rational.hpp"

namespace qgraph {

enum class VertexKind { Neumann, Dirichlet, Delta };

// δ-type vertex condition: continuity plus alpha * f(v) = sum of outgoing derivatives.
// Neumann is alpha = 0, Dirichlet the alpha -> infinity limit.
struct VertexCondition {
  VertexKind kind = VertexKind::Neumann;
  double alpha = 0.0;

  static VertexCondition neumann() { return {VertexKind::Neumann, 0.0}; }
  static VertexCondition dirichlet() { return {VertexKind::Dirichlet, 0.0}; }
  static VertexCondition delta(double a) { return {VertexKind::Delta, a}; }

  bool is_dirichlet() const { return kind == VertexKind::Dirichlet; }
  // True for Neumann and for Delta with zero coupling.
  bool is_neumann_like() const {
    return kind == VertexKind::Neumann || (kind == VertexKind::Delta && alpha == 0.0);
  }
  // Coupling strength; zero for Neumann. Meaningless for Dirichlet.
  double coupling() const { return kind == VertexKind::Delta ? alpha : 0.0; }

  bool operator==(const VertexCondition&) const = default;
};

struct Edge {
  int id = 0;
  int a = 0;  // first endpoint: origin of directed edge 2*id
  int b = 0;  // second endpoint: origin of directed edge 2*id+1
  double length = 0.0;
  std::optional<Rational> exact_length;

  bool is_loop() const { return a == b; }
};

// Neutral, already-parsed description consumed by build_graph.
struct VertexSpec {
  std::string name;
  VertexCondition condition;
};

struct EdgeSpec {
  std::string a;
  std::string b;
  double length = 0.0;
  std::optional<Rational> exact_length;
};

struct GraphDescription {
  std::vector<VertexSpec> vertices;
  std::vector<EdgeSpec> edges;

  bool operator==(const GraphDescription&) const;
};

struct GraphInvariants {
  int vertices = 0;
  int edges = 0;
  int components = 0;
  int beta = 0;  // first Betti number E - V + C
};

using IntMatrix = Eigen::Matrix<long long, Eigen::Dynamic, Eigen::Dynamic>;

// Directed edge d runs along edge d/2; d even goes a -> b, d odd goes b -> a.
inline int reverse(int d) { return d ^ 1; }
inline int edge_of(int d) { return d >> 1; }

// Immutable metric graph. Vertex and edge indices follow the description order.
class MetricGraph {
 public:
  int vertex_count() const { return static_cast<int>(names_.size()); }
  int edge_count() const { return static_cast<int>(edges_.size()); }
  int directed_count() const { return 2 * edge_count(); }

  const std::vector<Edge>& edges() const { return edges_; }
  const Edge& edge(int e) const { return edges_.at(e); }
  const std::string& name(int v) const { return names_.at(v); }
  const VertexCondition& condition(int v) const { return conditions_.at(v); }
  int degree(int v) const { return static_cast<int>(outgoing_.at(v).size()); }
  int max_degree() const;

  // Directed edges leaving v, sorted by index. A loop contributes both of its directions.
  const std::vector<int>& outgoing(int v) const { return outgoing_.at(v); }

  int origin(int d) const { return d % 2 == 0 ? edges_[edge_of(d)].a : edges_[edge_of(d)].b; }
  int terminus(int d) const { return origin(reverse(d)); }
  double directed_length(int d) const { return edges_[edge_of(d)].length; }

  double total_length() const;
  std::optional<Rational> exact_total_length() const;
  double min_edge_length() const;

  bool has_loops() const;
  bool is_simple() const;
  bool all_neumann() const;
  std::optional<int> find_vertex(const std::string& name) const;

  // Component index per vertex, components numbered in order of first vertex.
  std::vector<int> component_labels() const;

  MetricGraph with_condition(int v, VertexCondition c) const;
  GraphDescription description() const;

  friend MetricGraph build_graph(const GraphDescription& description);

 private:
  std::vector<std::string> names_;
  std::vector<VertexCondition> conditions_;
  std::vector<Edge> edges_;
  std::vector<std::vector<int>> outgoing_;
};

// Validates and indexes a description. Throws GraphError on dangling endpoints,
// non-positive lengths, duplicate vertex names or isolated vertices.
MetricGraph build_graph(const GraphDescription& description);

// V x V 0/1 matrix of a simple graph.
IntMatrix connectivity_matrix(const MetricGraph& g);

// B(d, d') = 1 iff directed edge d follows d', i.e. origin(d) == terminus(d').
IntMatrix edge_adjacency_matrix(const MetricGraph& g);

GraphInvariants invariants(const MetricGraph& g);

// Dimension of antisymmetric, divergence-free edge functions, by numerical rank.
int cycle_space_dim(const MetricGraph& g);

struct SmoothingResult {
  MetricGraph graph;
  // Degree-two Neumann vertices that could not be removed (isolated circles).
  std::vector<std::string> untouched;
};

// Removes every degree-two Neumann vertex, joining its two edges; lengths add.
SmoothingResult smooth_degree2_neumann(const MetricGraph& g);

}  // namespace qgraph
