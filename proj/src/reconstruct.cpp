#include <algorithm>
#include <functional>
#include <map>

#include "qgraph/errors.hpp"
#include "qgraph/orbits.hpp"

namespace qgraph {

namespace {

constexpr int kMaxVertices = 6;
constexpr int kMaxEdges = 7;

using Counts = std::map<Rational, int>;

Counts count(const std::vector<Rational>& xs) {
  Counts c;
  for (const auto& x : xs) ++c[x];
  return c;
}

bool contained(const std::vector<Rational>& xs, const Counts& budget) {
  Counts used;
  for (const auto& x : xs) {
    const auto it = budget.find(x);
    if (it == budget.end() || ++used[x] > it->second) return false;
  }
  return true;
}

MetricGraph assemble(const std::vector<Rational>& ls, const std::vector<std::pair<int, int>>& ends,
                     int vertices) {
  GraphDescription d;
  for (int v = 0; v < vertices; ++v) d.vertices.push_back({"v" + std::to_string(v), {}});
  for (std::size_t i = 0; i < ends.size(); ++i) {
    d.edges.push_back({"v" + std::to_string(ends[i].first), "v" + std::to_string(ends[i].second),
                       to_double(ls[i]), ls[i]});
  }
  return build_graph(d);
}

std::size_t score(const ListDiff& d) { return d.missing.size() + d.extra.size(); }

// Keeps the lowest-score candidates, one per isomorphism class.
void keep(std::vector<NearMiss>& out, NearMiss m) {
  constexpr std::size_t kNearMisses = 4;
  if (!out.empty() && score(m.diff) > score(out.back().diff) && out.size() >= kNearMisses) return;
  for (const auto& o : out) {
    if (isomorphic(o.graph, m.graph)) return;
  }
  const auto pos = std::upper_bound(out.begin(), out.end(), m, [](const NearMiss& a, const NearMiss& b) {
    return score(a.diff) < score(b.diff);
  });
  out.insert(pos, std::move(m));
  if (out.size() > kNearMisses) out.pop_back();
}

class TopologySearch {
 public:
  TopologySearch(std::vector<Rational> ls, const std::vector<Rational>& target,
                 OrbitCounting counting, bool multi_edges, bool near)
      : ls_(std::move(ls)),
        target_(target),
        budget_(count(target)),
        max_(target.back()),
        counting_(counting),
        multi_(multi_edges),
        near_(near) {}

  // Exact matches, or in near mode the graphs with the smallest list difference.
  void run(std::vector<NearMiss>& out) {
    ends_.clear();
    place(0, 0, out);
  }

 private:
  // Adjacent edges e, f carry the orbit bouncing on both, of length 2(l_e + l_f).
  bool adjacency_allowed(int i, int u, int v) const {
    for (int j = 0; j < i; ++j) {
      const auto [a, b] = ends_[j];
      if (a != u && a != v && b != u && b != v) continue;
      const Rational len = Rational(2) * (ls_[i] + ls_[j]);
      if (len <= max_ && budget_.count(len) == 0) return false;
    }
    return true;
  }

  void place(int i, int vertices, std::vector<NearMiss>& out) {
    const int edges = static_cast<int>(ls_.size());
    if (i == edges) {
      MetricGraph g = assemble(ls_, ends_, vertices);
      if (invariants(g).components != 1) return;
      ListDiff diff = diff_lengths(target_, exact_orbit_lengths(g, max_, counting_));
      if (near_) {
        keep(out, {std::move(g), std::move(diff)});
        return;
      }
      if (!diff.empty()) return;
      for (const auto& o : out) {
        if (isomorphic(o.graph, g)) return;
      }
      out.push_back({std::move(g), std::move(diff)});
      return;
    }
    // New vertices are numbered in order of appearance.
    std::vector<std::pair<int, int>> options;
    for (int u = 0; u < vertices; ++u) {
      for (int v = u + 1; v <= vertices; ++v) options.emplace_back(u, v);
    }
    options.emplace_back(vertices, vertices + 1);
    for (const auto& [u, v] : options) {
      const int grown = std::max(vertices, v + 1);
      if (grown > kMaxVertices) continue;
      const bool taken = std::find(ends_.begin(), ends_.end(), std::make_pair(u, v)) != ends_.end();
      if ((taken && !multi_) || !adjacency_allowed(i, u, v)) continue;
      ends_.emplace_back(u, v);
      bool ok = true;
      if (i >= 1 && !near_) {
        std::vector<Rational> prefix(ls_.begin(), ls_.begin() + i + 1);
        ok = contained(exact_orbit_lengths(assemble(prefix, ends_, grown), max_, counting_), budget_);
      }
      if (ok) place(i + 1, grown, out);
      ends_.pop_back();
    }
  }

  std::vector<Rational> ls_;
  const std::vector<Rational>& target_;
  Counts budget_;
  Rational max_;
  OrbitCounting counting_;
  bool multi_;
  bool near_;
  std::vector<std::pair<int, int>> ends_;
};

}  // namespace

Reconstruction reconstruct_search(const Rational& total_length, std::vector<Rational> lengths,
                                  OrbitCounting counting) {
  if (total_length <= Rational(0)) throw GraphError("total length must be positive");
  if (lengths.empty()) throw GraphError("length list is empty");
  std::sort(lengths.begin(), lengths.end());
  if (lengths.front() <= Rational(0)) throw GraphError("orbit lengths must be positive");
  const Rational max = lengths.back();
  const Counts budget = count(lengths);

  // Every edge of length l <= max/2 shows up through its bounce orbit of length 2l.
  std::vector<Rational> candidates;
  for (const auto& [l, c] : budget) candidates.push_back(l / Rational(2));

  std::vector<std::vector<Rational>> edge_sets;
  std::vector<Rational> chosen;
  std::function<void(std::size_t, Rational)> choose = [&](std::size_t i, Rational sum) {
    if (i == candidates.size()) {
      const Rational rest = total_length - sum;
      std::vector<Rational> ls = chosen;
      if (rest != Rational(0)) {
        // A single edge too long for its bounce to appear in the list.
        if (!(Rational(2) * rest > max)) return;
        ls.push_back(rest);
      }
      std::sort(ls.begin(), ls.end());
      if (static_cast<int>(ls.size()) > kMaxEdges) return;
      if (std::adjacent_find(ls.begin(), ls.end()) != ls.end()) return;
      edge_sets.push_back(ls);
      return;
    }
    choose(i + 1, sum);
    const Rational next = sum + candidates[i];
    if (next > total_length || static_cast<int>(chosen.size()) == kMaxEdges) return;
    // The bounce and its repetitions must all be listed.
    for (Rational m = Rational(2) * candidates[i]; m <= max; m += Rational(2) * candidates[i]) {
      if (budget.count(m) == 0) return;
    }
    chosen.push_back(candidates[i]);
    choose(i + 1, next);
    chosen.pop_back();
  };
  choose(0, Rational(0));

  Reconstruction result;
  result.counting = counting;
  // Simple graphs first; parallel edges only when no simple graph fits.
  for (const bool multi : {false, true}) {
    std::vector<NearMiss> found;
    for (const auto& ls : edge_sets) {
      TopologySearch(ls, lengths, counting, multi, false).run(found);
    }
    if (!found.empty()) {
      for (auto& f : found) result.survivors.push_back(std::move(f.graph));
      result.multi_edges = multi;
      return result;
    }
  }
  for (const auto& ls : edge_sets) {
    TopologySearch(ls, lengths, counting, true, true).run(result.near_misses);
  }
  return result;
}

Reconstruction reconstruct_graph(const Rational& total_length, std::vector<Rational> lengths,
                                 OrbitCounting counting) {
  auto result = reconstruct_search(total_length, std::move(lengths), counting);
  if (result.survivors.empty()) {
    std::string msg = "no loop-free graph with at most " + std::to_string(kMaxVertices) +
                      " vertices and " + std::to_string(kMaxEdges) +
                      " edges reproduces the length list";
    if (!result.near_misses.empty()) {
      const auto& d = result.near_misses.front().diff;
      msg += "; closest candidate differs by " + std::to_string(d.missing.size()) + " missing and " +
             std::to_string(d.extra.size()) + " extra lengths";
    }
    throw InfeasibleError(msg);
  }
  return result;
}

}  // namespace qgraph
