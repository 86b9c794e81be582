#pragma once

#include <optional>
#include <vector>

#include "qgraph/scattering.hpp"

namespace qgraph {

// Cyclic class of closed directed-edge trajectories; rep is its lexicographically
// minimal rotation and rep[i+1] follows rep[i] (wrapping around).
struct PeriodicOrbit {
  std::vector<int> rep;
  int period = 0;
  int primitive_period = 0;
  int repetition = 1;
  double length = 0.0;
  std::optional<Rational> exact_length;  // set when every edge length is exact
  cplx amplitude{0.0, 0.0};
};

inline constexpr int kMaxOrbitPeriod = 14;

// All periodic orbits with period <= max_period. Amplitudes are taken at wavenumber k.
// Throws GraphError if max_period exceeds kMaxOrbitPeriod.
std::vector<PeriodicOrbit> enumerate_orbits(const MetricGraph& g, int max_period, double k = 1.0);

// S(a1, an) S(an, a(n-1)) ... S(a2, a1) for the cycle a1 -> a2 -> ... -> an -> a1.
cplx orbit_amplitude(const MetricGraph& g, const std::vector<int>& rep, double k = 1.0);

struct LengthGroup {
  double length = 0.0;
  std::optional<Rational> exact_length;
  std::vector<PeriodicOrbit> orbits;
  cplx amplitude{0.0, 0.0};  // sum over the group
};

struct LengthSpectrum {
  std::vector<LengthGroup> entries;  // ascending length

  // Every orbit length, repeated once per orbit.
  std::vector<double> lengths() const;
  std::vector<Rational> exact_lengths() const;
};

// Orbits with length <= max_length, grouped exactly when lengths are rational and within
// 1e-9 max(1, length) otherwise. The period bound ceil(max_length / min edge) must not
// exceed kMaxLengthPeriod.
inline constexpr int kMaxLengthPeriod = 40;
LengthSpectrum length_spectrum(const MetricGraph& g, double max_length, double k = 1.0);

struct OrbitCounts {
  Rational weighted;       // tr(B^n) / n = sum over period-n orbits of 1/r
  long long primitive = 0;  // primitive orbits of period n, by Moebius inversion
  long long total = 0;      // all orbits of period n
};

OrbitCounts count_orbits_trace(const MetricGraph& g, int n);

int moebius(int n);

// Integer matrix power; throws NumericalError on 64-bit overflow.
IntMatrix matrix_power(const IntMatrix& a, int n);

// Slope of log(1^T C^n 1) against n over the top half of 1..n_max, with a (-1)^n term in
// the fit so that bipartite graphs do not bias the slope.
double growth_rate(const MetricGraph& g, int n_max);

struct LengthDifference {
  double length = 0.0;
  int count_first = 0;
  int count_second = 0;
  cplx amplitude_first{0.0, 0.0};
  cplx amplitude_second{0.0, 0.0};
};

struct IsospectralReport {
  int compared = 0;
  double max_difference = 0.0;
  bool eigenvalues_match = false;
  std::vector<double> first, second;  // eigenvalues k^2
  double cutoff = 0.0;
  std::vector<LengthDifference> length_differences;
};

// Compares the first n eigenvalues and the length spectra up to `cutoff` (0 picks
// 2 max(L1, L2)).
IsospectralReport isospectral_compare(const MetricGraph& g1, const MetricGraph& g2, int n,
                                      double tol, double cutoff = 0.0);

// Directed: an orbit and its time reverse count separately. UpToReversal: they count once,
// as in a list of geometric orbit lengths.
enum class OrbitCounting { Directed, UpToReversal };

// Orbit lengths of a graph with exact edge lengths, up to max_length, one per orbit.
std::vector<Rational> exact_orbit_lengths(const MetricGraph& g, const Rational& max_length,
                                          OrbitCounting counting = OrbitCounting::Directed);

// Canonical representative of the time-reversed orbit.
std::vector<int> reversed_rep(const std::vector<int>& rep);

// Multiset difference of two sorted lists.
struct ListDiff {
  std::vector<Rational> missing;  // in expected, absent from actual
  std::vector<Rational> extra;    // in actual, absent from expected
  bool empty() const { return missing.empty() && extra.empty(); }
};
ListDiff diff_lengths(const std::vector<Rational>& expected, const std::vector<Rational>& actual);

struct NearMiss {
  MetricGraph graph;
  ListDiff diff;
};

struct Reconstruction {
  std::vector<MetricGraph> survivors;
  // Filled only when nothing survives: the loop-free candidates closest to the list.
  std::vector<NearMiss> near_misses;
  OrbitCounting counting = OrbitCounting::UpToReversal;
  bool multi_edges = false;  // no simple graph fitted; survivors have parallel edges
  bool ambiguous() const { return survivors.size() > 1; }
};

// Loop-free Neumann graphs with rational edge lengths summing to total_length whose orbit
// lengths up to max(lengths) are exactly `lengths` (with multiplicity, in the given
// counting). Simple graphs are tried first, then graphs with parallel edges. Edges no longer
// than max/2 are read off the bounce orbits; at most one longer edge is allowed. Search
// bounded by V <= 6, E <= 7.
Reconstruction reconstruct_search(const Rational& total_length, std::vector<Rational> lengths,
                                  OrbitCounting counting = OrbitCounting::UpToReversal);

// As reconstruct_search, but throws InfeasibleError when no candidate survives.
Reconstruction reconstruct_graph(const Rational& total_length, std::vector<Rational> lengths,
                                 OrbitCounting counting = OrbitCounting::UpToReversal);

// Isomorphism test preserving exact edge lengths and vertex conditions.
bool isomorphic(const MetricGraph& a, const MetricGraph& b);

}  // namespace qgraph
