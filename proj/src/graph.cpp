#include "qgraph/graph.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>

#include "qgraph/errors.hpp"

namespace qgraph {

bool GraphDescription::operator==(const GraphDescription& o) const {
  if (vertices.size() != o.vertices.size() || edges.size() != o.edges.size()) return false;
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    if (vertices[i].name != o.vertices[i].name) return false;
    if (!(vertices[i].condition == o.vertices[i].condition)) return false;
  }
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const auto& x = edges[i];
    const auto& y = o.edges[i];
    if (x.a != y.a || x.b != y.b || x.length != y.length || x.exact_length != y.exact_length) {
      return false;
    }
  }
  return true;
}

MetricGraph build_graph(const GraphDescription& d) {
  MetricGraph g;
  std::map<std::string, int> index;
  for (const auto& v : d.vertices) {
    if (!index.emplace(v.name, static_cast<int>(g.names_.size())).second) {
      throw GraphError("duplicate vertex '" + v.name + "'");
    }
    if (v.condition.kind == VertexKind::Delta && !std::isfinite(v.condition.alpha)) {
      throw GraphError("vertex '" + v.name + "': coupling must be finite");
    }
    g.names_.push_back(v.name);
    g.conditions_.push_back(v.condition);
  }
  g.outgoing_.assign(g.names_.size(), {});
  for (const auto& e : d.edges) {
    auto ia = index.find(e.a);
    auto ib = index.find(e.b);
    if (ia == index.end()) throw GraphError("edge references unknown vertex '" + e.a + "'");
    if (ib == index.end()) throw GraphError("edge references unknown vertex '" + e.b + "'");
    double len = e.exact_length ? to_double(*e.exact_length) : e.length;
    if (!(len > 0.0) || !std::isfinite(len)) {
      throw GraphError("edge " + e.a + "-" + e.b + " must have positive length");
    }
    Edge edge;
    edge.id = static_cast<int>(g.edges_.size());
    edge.a = ia->second;
    edge.b = ib->second;
    edge.length = len;
    edge.exact_length = e.exact_length;
    g.outgoing_[edge.a].push_back(2 * edge.id);
    g.outgoing_[edge.b].push_back(2 * edge.id + 1);
    g.edges_.push_back(edge);
  }
  for (std::size_t v = 0; v < g.names_.size(); ++v) {
    if (g.outgoing_[v].empty()) throw GraphError("isolated vertex '" + g.names_[v] + "'");
    std::sort(g.outgoing_[v].begin(), g.outgoing_[v].end());
  }
  return g;
}

int MetricGraph::max_degree() const {
  int m = 0;
  for (const auto& o : outgoing_) m = std::max(m, static_cast<int>(o.size()));
  return m;
}

double MetricGraph::total_length() const {
  double s = 0.0;
  for (const auto& e : edges_) s += e.length;
  return s;
}

std::optional<Rational> MetricGraph::exact_total_length() const {
  Rational s = 0;
  for (const auto& e : edges_) {
    if (!e.exact_length) return std::nullopt;
    s += *e.exact_length;
  }
  return s;
}

double MetricGraph::min_edge_length() const {
  double m = edges_.empty() ? 0.0 : edges_.front().length;
  for (const auto& e : edges_) m = std::min(m, e.length);
  return m;
}

bool MetricGraph::has_loops() const {
  return std::any_of(edges_.begin(), edges_.end(), [](const Edge& e) { return e.is_loop(); });
}

bool MetricGraph::is_simple() const {
  std::set<std::pair<int, int>> seen;
  for (const auto& e : edges_) {
    if (e.is_loop()) return false;
    if (!seen.emplace(std::min(e.a, e.b), std::max(e.a, e.b)).second) return false;
  }
  return true;
}

bool MetricGraph::all_neumann() const {
  return std::all_of(conditions_.begin(), conditions_.end(),
                     [](const VertexCondition& c) { return c.is_neumann_like(); });
}

std::optional<int> MetricGraph::find_vertex(const std::string& n) const {
  auto it = std::find(names_.begin(), names_.end(), n);
  if (it == names_.end()) return std::nullopt;
  return static_cast<int>(it - names_.begin());
}

std::vector<int> MetricGraph::component_labels() const {
  const int n = vertex_count();
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const auto& e : edges_) parent[find(e.a)] = find(e.b);
  std::vector<int> label(n, -1);
  std::map<int, int> root_label;
  for (int v = 0; v < n; ++v) {
    auto [it, inserted] = root_label.emplace(find(v), static_cast<int>(root_label.size()));
    label[v] = it->second;
  }
  return label;
}

MetricGraph MetricGraph::with_condition(int v, VertexCondition c) const {
  MetricGraph g = *this;
  g.conditions_.at(v) = c;
  return g;
}

GraphDescription MetricGraph::description() const {
  GraphDescription d;
  for (int v = 0; v < vertex_count(); ++v) d.vertices.push_back({names_[v], conditions_[v]});
  for (const auto& e : edges_) {
    d.edges.push_back({names_[e.a], names_[e.b], e.length, e.exact_length});
  }
  return d;
}

IntMatrix connectivity_matrix(const MetricGraph& g) {
  if (!g.is_simple()) throw GraphError("connectivity matrix requires a simple graph");
  IntMatrix c = IntMatrix::Zero(g.vertex_count(), g.vertex_count());
  for (const auto& e : g.edges()) {
    c(e.a, e.b) = 1;
    c(e.b, e.a) = 1;
  }
  return c;
}

IntMatrix edge_adjacency_matrix(const MetricGraph& g) {
  const int n = g.directed_count();
  IntMatrix b = IntMatrix::Zero(n, n);
  for (int from = 0; from < n; ++from) {
    for (int to : g.outgoing(g.terminus(from))) b(to, from) = 1;
  }
  return b;
}

GraphInvariants invariants(const MetricGraph& g) {
  GraphInvariants inv;
  inv.vertices = g.vertex_count();
  inv.edges = g.edge_count();
  const auto labels = g.component_labels();
  inv.components = labels.empty() ? 0 : *std::max_element(labels.begin(), labels.end()) + 1;
  inv.beta = inv.edges - inv.vertices + inv.components;
  return inv;
}

int cycle_space_dim(const MetricGraph& g) {
  const int n = g.directed_count();
  const int rows = g.edge_count() + g.vertex_count();
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(rows, n);
  // antisymmetry: w(2e) + w(2e+1) = 0
  for (int e = 0; e < g.edge_count(); ++e) {
    a(e, 2 * e) = 1.0;
    a(e, 2 * e + 1) = 1.0;
  }
  // zero divergence at every vertex
  for (int v = 0; v < g.vertex_count(); ++v) {
    for (int d : g.outgoing(v)) a(g.edge_count() + v, d) += 1.0;
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a);
  const auto& s = svd.singularValues();
  const double cut = 1e-9 * (s.size() > 0 ? s(0) : 0.0);
  int rank = 0;
  for (int i = 0; i < s.size(); ++i) rank += s(i) > cut ? 1 : 0;
  return n - rank;
}

SmoothingResult smooth_degree2_neumann(const MetricGraph& g) {
  struct WorkEdge {
    int a, b;
    double length;
    std::optional<Rational> exact;
    bool alive = true;
  };
  std::vector<WorkEdge> edges;
  for (const auto& e : g.edges()) edges.push_back({e.a, e.b, e.length, e.exact_length});
  std::vector<bool> alive(g.vertex_count(), true);
  std::set<int> reported;

  auto incident = [&](int v) {
    std::vector<int> ends;  // edge index repeated per incident end
    for (std::size_t i = 0; i < edges.size(); ++i) {
      if (!edges[i].alive) continue;
      if (edges[i].a == v) ends.push_back(static_cast<int>(i));
      if (edges[i].b == v) ends.push_back(static_cast<int>(i));
    }
    return ends;
  };

  bool changed = true;
  while (changed) {
    changed = false;
    for (int v = 0; v < g.vertex_count(); ++v) {
      if (!alive[v] || !g.condition(v).is_neumann_like()) continue;
      const auto ends = incident(v);
      if (ends.size() != 2) continue;
      if (ends[0] == ends[1]) {
        reported.insert(v);
        continue;
      }
      WorkEdge& e1 = edges[ends[0]];
      WorkEdge& e2 = edges[ends[1]];
      const int x = e1.a == v ? e1.b : e1.a;
      const int y = e2.a == v ? e2.b : e2.a;
      e1.a = x;
      e1.b = y;
      e1.length += e2.length;
      if (e1.exact && e2.exact) {
        e1.exact = *e1.exact + *e2.exact;
        e1.length = to_double(*e1.exact);
      } else {
        e1.exact.reset();
      }
      e2.alive = false;
      alive[v] = false;
      changed = true;
    }
  }

  GraphDescription d;
  for (int v = 0; v < g.vertex_count(); ++v) {
    if (alive[v]) d.vertices.push_back({g.name(v), g.condition(v)});
  }
  for (const auto& e : edges) {
    if (e.alive) d.edges.push_back({g.name(e.a), g.name(e.b), e.length, e.exact});
  }
  SmoothingResult r{build_graph(d), {}};
  for (int v : reported) r.untouched.push_back(g.name(v));
  return r;
}

}  // namespace qgraph
