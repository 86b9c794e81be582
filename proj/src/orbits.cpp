#include "qgraph/orbits.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>

#include "qgraph/errors.hpp"
#include "qgraph/secular.hpp"

namespace qgraph {

namespace {

bool all_exact(const MetricGraph& g) {
  for (const auto& e : g.edges()) {
    if (!e.exact_length) return false;
  }
  return true;
}

bool is_min_rotation(const std::vector<int>& seq) {
  const int n = static_cast<int>(seq.size());
  for (int i = 1; i < n; ++i) {
    if (seq[i] != seq[0]) continue;
    for (int j = 0; j < n; ++j) {
      const int a = seq[(i + j) % n];
      if (a < seq[j]) return false;
      if (a > seq[j]) break;
    }
  }
  return true;
}

int primitive_period(const std::vector<int>& seq) {
  const int n = static_cast<int>(seq.size());
  for (int p = 1; p < n; ++p) {
    if (n % p != 0) continue;
    bool ok = true;
    for (int i = p; i < n && ok; ++i) ok = seq[i] == seq[i - p];
    if (ok) return p;
  }
  return n;
}

// Depth-first search over closed trajectories whose first element is their minimum.
// Branches are cut once the accumulated length passes the limit.
class CycleSearch {
 public:
  explicit CycleSearch(const MetricGraph& g) : g_(g) {
    succ_.resize(g.directed_count());
    for (int d = 0; d < g.directed_count(); ++d) succ_[d] = g.outgoing(g.terminus(d));
  }

  void run(int max_period, double max_length,
           const std::function<void(const std::vector<int>&, double)>& emit) {
    const double slack = 1e-9 * std::max(1.0, max_length);
    for (int s = 0; s < g_.directed_count(); ++s) {
      seq_.assign(1, s);
      step(s, g_.directed_length(s), max_period, max_length + slack, emit);
    }
  }

 private:
  void step(int s, double len, int max_period, double limit,
            const std::function<void(const std::vector<int>&, double)>& emit) {
    const int last = seq_.back();
    const int n = static_cast<int>(seq_.size());
    for (int d : succ_[last]) {
      if (d == s && is_min_rotation(seq_)) emit(seq_, len);
    }
    if (n == max_period) return;
    for (int d : succ_[last]) {
      if (d < s) continue;
      const double next = len + g_.directed_length(d);
      if (next > limit) continue;
      seq_.push_back(d);
      step(s, next, max_period, limit, emit);
      seq_.pop_back();
    }
  }

  const MetricGraph& g_;
  std::vector<std::vector<int>> succ_;
  std::vector<int> seq_;
};

PeriodicOrbit make_orbit(const MetricGraph& g, const std::vector<int>& seq, double len,
                         const CMatrix& s, bool exact) {
  PeriodicOrbit o;
  o.rep = seq;
  o.period = static_cast<int>(seq.size());
  o.primitive_period = primitive_period(seq);
  o.repetition = o.period / o.primitive_period;
  o.length = len;
  if (exact) {
    Rational l(0);
    for (int d : seq) l += *g.edge(edge_of(d)).exact_length;
    o.exact_length = l;
    o.length = to_double(l);
  }
  cplx a(1.0, 0.0);
  for (int i = 0; i < o.period; ++i) a *= s(seq[(i + 1) % o.period], seq[i]);
  o.amplitude = a;
  return o;
}

int period_bound(const MetricGraph& g, double max_length) {
  const double b = std::ceil(max_length / g.min_edge_length() - 1e-12);
  if (b > kMaxLengthPeriod) {
    throw GraphError("length cutoff needs orbits of period " + std::to_string(static_cast<long>(b)) +
                     ", above the limit " + std::to_string(kMaxLengthPeriod));
  }
  return std::max(1, static_cast<int>(b));
}

long long checked_mul(long long a, long long b) {
  long long r;
  if (__builtin_mul_overflow(a, b, &r)) throw NumericalError("integer matrix power overflows");
  return r;
}

long long checked_add(long long a, long long b) {
  long long r;
  if (__builtin_add_overflow(a, b, &r)) throw NumericalError("integer matrix power overflows");
  return r;
}

IntMatrix checked_product(const IntMatrix& a, const IntMatrix& b) {
  IntMatrix c = IntMatrix::Zero(a.rows(), b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index k = 0; k < a.cols(); ++k) {
      if (a(i, k) == 0) continue;
      for (Eigen::Index j = 0; j < b.cols(); ++j) {
        c(i, j) = checked_add(c(i, j), checked_mul(a(i, k), b(k, j)));
      }
    }
  }
  return c;
}

long long trace_power(const IntMatrix& b, int n) { return matrix_power(b, n).trace(); }

}  // namespace

std::vector<PeriodicOrbit> enumerate_orbits(const MetricGraph& g, int max_period, double k) {
  if (max_period < 1) throw GraphError("max_period must be at least 1");
  if (max_period > kMaxOrbitPeriod) {
    throw GraphError("max_period " + std::to_string(max_period) + " exceeds " +
                     std::to_string(kMaxOrbitPeriod));
  }
  const CMatrix s = big_S(g, k);
  const bool exact = all_exact(g);
  std::vector<PeriodicOrbit> out;
  CycleSearch search(g);
  search.run(max_period, std::numeric_limits<double>::infinity(),
             [&](const std::vector<int>& seq, double len) {
               out.push_back(make_orbit(g, seq, len, s, exact));
             });
  std::sort(out.begin(), out.end(), [](const PeriodicOrbit& a, const PeriodicOrbit& b) {
    return a.period != b.period ? a.period < b.period : a.rep < b.rep;
  });
  return out;
}

cplx orbit_amplitude(const MetricGraph& g, const std::vector<int>& rep, double k) {
  const CMatrix s = big_S(g, k);
  const int n = static_cast<int>(rep.size());
  if (n == 0) throw GraphError("empty orbit");
  cplx a(1.0, 0.0);
  for (int i = 0; i < n; ++i) {
    const int from = rep[i];
    const int to = rep[(i + 1) % n];
    if (g.origin(to) != g.terminus(from)) throw GraphError("orbit is not a closed trajectory");
    a *= s(to, from);
  }
  return a;
}

std::vector<double> LengthSpectrum::lengths() const {
  std::vector<double> out;
  for (const auto& e : entries) out.insert(out.end(), e.orbits.size(), e.length);
  return out;
}

std::vector<Rational> LengthSpectrum::exact_lengths() const {
  std::vector<Rational> out;
  for (const auto& e : entries) {
    if (!e.exact_length) throw GraphError("length spectrum is not exact");
    out.insert(out.end(), e.orbits.size(), *e.exact_length);
  }
  return out;
}

LengthSpectrum length_spectrum(const MetricGraph& g, double max_length, double k) {
  if (!(max_length > 0.0)) throw GraphError("max_length must be positive");
  const int max_period = period_bound(g, max_length);
  const CMatrix s = big_S(g, k);
  const bool exact = all_exact(g);
  std::vector<PeriodicOrbit> orbits;
  CycleSearch search(g);
  search.run(max_period, max_length, [&](const std::vector<int>& seq, double len) {
    orbits.push_back(make_orbit(g, seq, len, s, exact));
  });
  std::sort(orbits.begin(), orbits.end(), [](const PeriodicOrbit& a, const PeriodicOrbit& b) {
    if (a.exact_length && b.exact_length && *a.exact_length != *b.exact_length) {
      return *a.exact_length < *b.exact_length;
    }
    if (a.length != b.length) return a.length < b.length;
    return a.rep < b.rep;
  });
  LengthSpectrum spec;
  for (auto& o : orbits) {
    if (o.length > max_length + 1e-9 * std::max(1.0, max_length)) continue;
    bool same = false;
    if (!spec.entries.empty()) {
      const auto& last = spec.entries.back();
      same = exact ? *last.exact_length == *o.exact_length
                   : std::abs(o.length - last.length) <= 1e-9 * std::max(1.0, o.length);
    }
    if (!same) {
      LengthGroup grp;
      grp.length = o.length;
      grp.exact_length = o.exact_length;
      spec.entries.push_back(grp);
    }
    spec.entries.back().amplitude += o.amplitude;
    spec.entries.back().orbits.push_back(std::move(o));
  }
  return spec;
}

int moebius(int n) {
  if (n < 1) throw GraphError("Moebius function needs n >= 1");
  int result = 1;
  for (int p = 2; p * p <= n; ++p) {
    if (n % p != 0) continue;
    n /= p;
    if (n % p == 0) return 0;
    result = -result;
  }
  if (n > 1) result = -result;
  return result;
}

IntMatrix matrix_power(const IntMatrix& a, int n) {
  if (n < 0) throw GraphError("negative matrix power");
  IntMatrix result = IntMatrix::Identity(a.rows(), a.cols());
  IntMatrix base = a;
  while (n > 0) {
    if (n & 1) result = checked_product(result, base);
    n >>= 1;
    if (n > 0) base = checked_product(base, base);
  }
  return result;
}

OrbitCounts count_orbits_trace(const MetricGraph& g, int n) {
  if (n < 1) throw GraphError("n must be at least 1");
  const IntMatrix b = edge_adjacency_matrix(g);
  std::vector<long long> primitive(n + 1, 0);
  for (int m = 1; m <= n; ++m) {
    if (n % m != 0) continue;
    long long sum = 0;
    for (int d = 1; d <= m; ++d) {
      if (m % d == 0) sum += moebius(d) * trace_power(b, m / d);
    }
    if (sum % m != 0) throw NumericalError("Moebius sum is not divisible by the period");
    primitive[m] = sum / m;
  }
  OrbitCounts c;
  c.weighted = Rational(trace_power(b, n), n);
  c.primitive = primitive[n];
  for (int m = 1; m <= n; ++m) c.total += primitive[m];
  return c;
}

double growth_rate(const MetricGraph& g, int n_max) {
  if (n_max < 10) throw GraphError("n_max must be at least 10");
  if (!g.is_simple()) throw GraphError("growth rate needs a simple graph");
  if (invariants(g).components != 1) throw GraphError("growth rate needs a connected graph");
  const Eigen::MatrixXd c = connectivity_matrix(g).cast<double>();
  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(c.rows());
  Eigen::VectorXd walk = ones;
  const int first = n_max / 2 + 1;
  const int count = n_max - first + 1;
  Eigen::MatrixXd design(count, 3);
  Eigen::VectorXd y(count);
  for (int n = 1; n <= n_max; ++n) {
    walk = c * walk;
    if (n < first) continue;
    const int row = n - first;
    design(row, 0) = 1.0;
    design(row, 1) = n;
    design(row, 2) = n % 2 == 0 ? 1.0 : -1.0;
    y(row) = std::log(ones.dot(walk));
  }
  const Eigen::VectorXd coef = design.colPivHouseholderQr().solve(y);
  return coef(1);
}

IsospectralReport isospectral_compare(const MetricGraph& g1, const MetricGraph& g2, int n,
                                      double tol, double cutoff) {
  if (n < 1) throw GraphError("n must be at least 1");
  auto first_n = [n](const MetricGraph& g) {
    double k_max = std::max(1.0, (n + 2.0) * 3.14159265358979323846 / g.total_length());
    for (;;) {
      auto list = eigenvalues(g, k_max).eigenvalue_list();
      if (static_cast<int>(list.size()) >= n) {
        list.resize(n);
        return list;
      }
      k_max *= 2.0;
    }
  };
  IsospectralReport r;
  r.first = first_n(g1);
  r.second = first_n(g2);
  r.compared = n;
  for (int i = 0; i < n; ++i) {
    r.max_difference = std::max(r.max_difference, std::abs(r.first[i] - r.second[i]));
  }
  r.eigenvalues_match = r.max_difference <= tol;
  r.cutoff = cutoff > 0.0 ? cutoff : 2.0 * std::max(g1.total_length(), g2.total_length());
  const auto s1 = length_spectrum(g1, r.cutoff);
  const auto s2 = length_spectrum(g2, r.cutoff);
  std::size_t i = 0;
  std::size_t j = 0;
  auto close = [](double a, double b) { return std::abs(a - b) <= 1e-9 * std::max(1.0, a); };
  while (i < s1.entries.size() || j < s2.entries.size()) {
    LengthDifference d;
    if (j == s2.entries.size() ||
        (i < s1.entries.size() && !close(s1.entries[i].length, s2.entries[j].length) &&
         s1.entries[i].length < s2.entries[j].length)) {
      d.length = s1.entries[i].length;
      d.count_first = static_cast<int>(s1.entries[i].orbits.size());
      d.amplitude_first = s1.entries[i].amplitude;
      ++i;
    } else if (i == s1.entries.size() || !close(s1.entries[i].length, s2.entries[j].length)) {
      d.length = s2.entries[j].length;
      d.count_second = static_cast<int>(s2.entries[j].orbits.size());
      d.amplitude_second = s2.entries[j].amplitude;
      ++j;
    } else {
      d.length = s1.entries[i].length;
      d.count_first = static_cast<int>(s1.entries[i].orbits.size());
      d.count_second = static_cast<int>(s2.entries[j].orbits.size());
      d.amplitude_first = s1.entries[i].amplitude;
      d.amplitude_second = s2.entries[j].amplitude;
      ++i;
      ++j;
    }
    if (d.count_first != d.count_second) r.length_differences.push_back(d);
  }
  return r;
}

std::vector<int> reversed_rep(const std::vector<int>& rep) {
  std::vector<int> r(rep.rbegin(), rep.rend());
  for (int& d : r) d = reverse(d);
  std::vector<int> best = r;
  for (std::size_t i = 1; i < r.size(); ++i) {
    std::rotate(r.begin(), r.begin() + 1, r.end());
    if (r < best) best = r;
  }
  return best;
}

std::vector<Rational> exact_orbit_lengths(const MetricGraph& g, const Rational& max_length,
                                          OrbitCounting counting) {
  if (!all_exact(g)) throw GraphError("exact orbit lengths need exact edge lengths");
  const int max_period = period_bound(g, to_double(max_length));
  std::vector<Rational> out;
  CycleSearch search(g);
  search.run(max_period, to_double(max_length), [&](const std::vector<int>& seq, double) {
    if (counting == OrbitCounting::UpToReversal && reversed_rep(seq) < seq) return;
    Rational l(0);
    for (int d : seq) l += *g.edge(edge_of(d)).exact_length;
    if (l <= max_length) out.push_back(l);
  });
  std::sort(out.begin(), out.end());
  return out;
}

ListDiff diff_lengths(const std::vector<Rational>& expected, const std::vector<Rational>& actual) {
  ListDiff d;
  std::set_difference(expected.begin(), expected.end(), actual.begin(), actual.end(),
                      std::back_inserter(d.missing));
  std::set_difference(actual.begin(), actual.end(), expected.begin(), expected.end(),
                      std::back_inserter(d.extra));
  return d;
}

bool isomorphic(const MetricGraph& a, const MetricGraph& b) {
  if (a.vertex_count() != b.vertex_count() || a.edge_count() != b.edge_count()) return false;
  const int n = a.vertex_count();
  // Sorted edge lengths per unordered vertex pair.
  using Key = std::pair<int, int>;
  auto bundles = [](const MetricGraph& g) {
    std::map<Key, std::vector<double>> m;
    for (const auto& e : g.edges()) {
      const double l = e.exact_length ? to_double(*e.exact_length) : e.length;
      m[{std::min(e.a, e.b), std::max(e.a, e.b)}].push_back(l);
    }
    for (auto& [k, v] : m) std::sort(v.begin(), v.end());
    return m;
  };
  const auto ma = bundles(a);
  const auto mb = bundles(b);
  auto bundle = [](const std::map<Key, std::vector<double>>& m, int u, int v) {
    static const std::vector<double> empty;
    const auto it = m.find({std::min(u, v), std::max(u, v)});
    return it == m.end() ? empty : it->second;
  };
  auto same = [](const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size()) return false;
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (std::abs(x[i] - y[i]) > 1e-12 * std::max(1.0, x[i])) return false;
    }
    return true;
  };
  std::vector<int> map(n, -1);
  std::vector<bool> used(n, false);
  std::function<bool(int)> extend = [&](int u) {
    if (u == n) return true;
    for (int v = 0; v < n; ++v) {
      if (used[v] || a.degree(u) != b.degree(v) || !(a.condition(u) == b.condition(v))) continue;
      bool ok = true;
      for (int w = 0; w <= u && ok; ++w) {
        const int mw = w == u ? v : map[w];
        ok = same(bundle(ma, u, w), bundle(mb, v, mw));
      }
      if (!ok) continue;
      map[u] = v;
      used[v] = true;
      if (extend(u + 1)) return true;
      used[v] = false;
      map[u] = -1;
    }
    return false;
  };
  return extend(0);
}

}  // namespace qgraph
