#include "qgraph/builders.hpp"

#include <string>

namespace qgraph {

MetricGraph make_interval(double l, VertexCondition left, VertexCondition right) {
  GraphDescription d;
  d.vertices = {{"a", left}, {"b", right}};
  d.edges = {{"a", "b", l, std::nullopt}};
  return build_graph(d);
}

MetricGraph make_delta_interval(double l1, double l2, double alpha) {
  GraphDescription d;
  d.vertices = {{"a", VertexCondition::dirichlet()},
                {"o", VertexCondition::delta(alpha)},
                {"b", VertexCondition::dirichlet()}};
  d.edges = {{"a", "o", l1, std::nullopt}, {"o", "b", l2, std::nullopt}};
  return build_graph(d);
}

MetricGraph make_star(const std::vector<double>& lengths, VertexCondition centre,
                      VertexCondition leaf) {
  GraphDescription d;
  d.vertices.push_back({"o", centre});
  for (std::size_t i = 0; i < lengths.size(); ++i) {
    const std::string name = "v" + std::to_string(i + 1);
    d.vertices.push_back({name, leaf});
    d.edges.push_back({"o", name, lengths[i], std::nullopt});
  }
  return build_graph(d);
}

MetricGraph make_circle(double l) {
  GraphDescription d;
  d.vertices = {{"o", VertexCondition::neumann()}};
  d.edges = {{"o", "o", l, std::nullopt}};
  return build_graph(d);
}

MetricGraph make_cycle(int n, double l) {
  GraphDescription d;
  for (int i = 0; i < n; ++i) d.vertices.push_back({"c" + std::to_string(i), {}});
  for (int i = 0; i < n; ++i) {
    d.edges.push_back({"c" + std::to_string(i), "c" + std::to_string((i + 1) % n), l,
                       std::nullopt});
  }
  return build_graph(d);
}

MetricGraph make_path(const std::vector<Rational>& lengths) {
  GraphDescription d;
  for (std::size_t i = 0; i <= lengths.size(); ++i) {
    d.vertices.push_back({"p" + std::to_string(i), {}});
  }
  for (std::size_t i = 0; i < lengths.size(); ++i) {
    d.edges.push_back({"p" + std::to_string(i), "p" + std::to_string(i + 1),
                       to_double(lengths[i]), lengths[i]});
  }
  return build_graph(d);
}

MetricGraph make_path(const std::vector<double>& lengths) {
  GraphDescription d;
  for (std::size_t i = 0; i <= lengths.size(); ++i) {
    d.vertices.push_back({"p" + std::to_string(i), {}});
  }
  for (std::size_t i = 0; i < lengths.size(); ++i) {
    d.edges.push_back(
        {"p" + std::to_string(i), "p" + std::to_string(i + 1), lengths[i], std::nullopt});
  }
  return build_graph(d);
}

MetricGraph make_complete(int n, double l) {
  GraphDescription d;
  for (int i = 0; i < n; ++i) d.vertices.push_back({"k" + std::to_string(i), {}});
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      d.edges.push_back({"k" + std::to_string(i), "k" + std::to_string(j), l, std::nullopt});
    }
  }
  return build_graph(d);
}

MetricGraph disjoint_union(const MetricGraph& a, const MetricGraph& b) {
  GraphDescription d = a.description();
  GraphDescription db = b.description();
  for (auto& v : db.vertices) d.vertices.push_back({v.name + "'", v.condition});
  for (auto& e : db.edges) d.edges.push_back({e.a + "'", e.b + "'", e.length, e.exact_length});
  return build_graph(d);
}

}  // namespace qgraph
