#include "qgraph/commands.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <ostream>

#include <CLI11.hpp>

#include "qgraph/dynamics.hpp"
#include "qgraph/errors.hpp"
#include "qgraph/graph_io.hpp"
#include "qgraph/orbits.hpp"
#include "qgraph/secular.hpp"
#include "qgraph/spectral.hpp"

namespace qgraph {

namespace {

int guarded(std::ostream& err, const std::function<int()>& body) {
  try {
    return body();
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << '\n';
    return kExitParse;
  } catch (const GraphError& e) {
    err << "invalid input: " << e.what() << '\n';
    return kExitParse;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kExitNumeric;
  } catch (const InfeasibleError& e) {
    err << "no consistent graph: " << e.what() << '\n';
    return kExitInfeasible;
  }
}

std::ofstream open_csv(const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw GraphError("cannot write '" + path + "'");
  return f;
}

SecularMethod method_of(const std::string& name) {
  if (name == "det") return SecularMethod::Det;
  if (name == "real") return SecularMethod::Real;
  if (name == "vertex") return SecularMethod::Vertex;
  if (name == "star") return SecularMethod::Star;
  throw GraphError("unknown method '" + name + "'");
}

std::string rep_text(const std::vector<int>& rep) {
  std::string s;
  for (int d : rep) s += (s.empty() ? "" : " ") + std::to_string(d);
  return s;
}

std::string list_text(const std::vector<Rational>& v) {
  if (v.empty()) return "none";
  std::string s;
  for (const auto& r : v) s += (s.empty() ? "" : " ") + to_string(r);
  return s;
}

void write_orbit_table(std::ostream& out, const std::vector<PeriodicOrbit>& orbits) {
  out << "rep,n,n_p,r,length,length_exact,amplitude_re,amplitude_im\n";
  for (const auto& o : orbits) {
    out << rep_text(o.rep) << ',' << o.period << ',' << o.primitive_period << ','
        << o.repetition << ',' << format_double(o.length) << ','
        << (o.exact_length ? to_string(*o.exact_length) : "") << ','
        << format_double(o.amplitude.real()) << ',' << format_double(o.amplitude.imag()) << '\n';
  }
}

void write_reconstructed(std::ostream& out, const MetricGraph& g, const LengthList& list,
                         OrbitCounting counting) {
  out << render_graph_text(g.description());
  std::vector<Rational> expected = list.lengths;
  std::sort(expected.begin(), expected.end());
  const auto actual = exact_orbit_lengths(g, expected.back(), counting);
  const ListDiff diff = diff_lengths(expected, actual);
  out << "# verification up to " << to_string(expected.back()) << ", total "
      << to_string(*g.exact_total_length()) << '\n'
      << "# missing: " << list_text(diff.missing) << '\n'
      << "# extra: " << list_text(diff.extra) << '\n';
}

}  // namespace

int cmd_spectrum(const SpectrumOptions& o, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const MetricGraph g = read_graph_file(o.graph);
    const Spectrum s = eigenvalues(g, o.k_max, o.tol, method_of(o.method));
    out << "k,multiplicity,eigenvalue\n";
    for (double kappa : s.negative) {
      out << format_double(kappa) << "i,1," << format_double(-kappa * kappa) << '\n';
    }
    if (s.zero_multiplicity > 0) out << "0," << s.zero_multiplicity << ",0\n";
    for (const auto& p : s.points) {
      out << format_double(p.k) << ',' << p.multiplicity << ',' << format_double(p.eigenvalue)
          << '\n';
    }
    if (!o.csv.empty()) {
      auto f = open_csv(o.csv);
      const int samples = std::max(2000, static_cast<int>(std::ceil(32.0 * g.total_length() *
                                                                    o.k_max / std::acos(-1.0))));
      f << "k,zeta\n";
      for (int i = 1; i <= samples; ++i) {
        const double k = o.k_max * i / samples;
        double z = std::nan("");
        try {
          z = secular_real(g, k);
        } catch (const NumericalError&) {
        }
        f << format_double(k) << ',' << format_double(z) << '\n';
      }
    }
    return kExitOk;
  });
}

int cmd_counting(const CountingOptions& o, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    if (!(o.epsilon > 0.0)) throw GraphError("epsilon must be positive");
    const MetricGraph g = read_graph_file(o.graph);
    const CountingReport r = counting_trace_formula(g, o.k, o.epsilon);
    out << "k," << format_double(r.k) << '\n'
        << "epsilon," << format_double(r.epsilon) << '\n'
        << "N0," << (r.n0_exact ? to_string(*r.n0_exact) : format_double(r.n0)) << '\n'
        << "weyl," << format_double(r.weyl_term) << '\n'
        << "coupling_phase," << format_double(r.coupling_phase_term) << '\n'
        << "oscillatory," << format_double(r.oscillatory_term) << '\n'
        << "formula," << format_double(r.trace_formula_value) << '\n'
        << "direct," << r.direct_count << '\n'
        << "difference," << format_double(r.trace_formula_value - r.direct_count) << '\n';
    return kExitOk;
  });
}

int cmd_orbits(const OrbitsOptions& o, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    if (o.max_length.has_value() == o.max_period.has_value()) {
      throw GraphError("give exactly one of --max-length and --max-period");
    }
    const MetricGraph g = read_graph_file(o.graph);
    std::vector<PeriodicOrbit> orbits;
    if (o.max_period) {
      orbits = enumerate_orbits(g, *o.max_period, o.k);
      std::stable_sort(orbits.begin(), orbits.end(), [](const auto& a, const auto& b) {
        return a.period != b.period ? a.period < b.period : a.rep < b.rep;
      });
    } else {
      for (const auto& group : length_spectrum(g, *o.max_length, o.k).entries) {
        orbits.insert(orbits.end(), group.orbits.begin(), group.orbits.end());
      }
    }
    write_orbit_table(out, orbits);
    if (!o.csv.empty()) {
      auto f = open_csv(o.csv);
      write_orbit_table(f, orbits);
    }
    return kExitOk;
  });
}

int cmd_reconstruct(const ReconstructOptions& o, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const LengthList list = read_length_list_file(o.list);
    const OrbitCounting counting =
        o.directed ? OrbitCounting::Directed : OrbitCounting::UpToReversal;
    const Reconstruction r = reconstruct_search(list.total, list.lengths, counting);
    if (r.survivors.empty()) {
      err << "no consistent graph\n";
      for (std::size_t i = 0; i < r.near_misses.size(); ++i) {
        out << "# near miss " << i + 1 << '\n';
        write_reconstructed(out, r.near_misses[i].graph, list, counting);
      }
      return kExitInfeasible;
    }
    if (r.ambiguous()) out << "# " << r.survivors.size() << " non-isomorphic graphs fit the list\n";
    if (r.multi_edges) out << "# no simple graph fits; parallel edges used\n";
    for (std::size_t i = 0; i < r.survivors.size(); ++i) {
      if (r.ambiguous()) out << "# survivor " << i + 1 << '\n';
      write_reconstructed(out, r.survivors[i], list, counting);
    }
    return kExitOk;
  });
}

int cmd_dynamics(const DynamicsOptions& o, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const MetricGraph g = read_graph_file(o.graph);
    const MarkovMap m = classical_map(g, o.k);
    const ClassificationReport r = classify(m);
    out << "bistochastic_defect," << format_double(m.bistochastic_defect) << '\n'
        << "eigenvalue_re,eigenvalue_im,modulus,distance_to_one\n";
    for (const cplx& l : m.eigenvalues) {
      out << format_double(l.real()) << ',' << format_double(l.imag()) << ','
          << format_double(std::abs(l)) << ',' << format_double(std::abs(1.0 - l)) << '\n';
    }
    out << "gap," << format_double(r.gap) << '\n'
        << "gap_modulus," << format_double(r.gap_modulus) << '\n'
        << "strongly_connected," << (dynamical_connectivity(m) ? "yes" : "no") << '\n'
        << "classification," << to_string(r.classification) << '\n'
        << "cesaro_steps," << r.cesaro_steps << '\n'
        << "cesaro_distance," << format_double(r.cesaro_distance) << '\n'
        << "plain_steps," << r.plain_steps << '\n'
        << "plain_distance," << format_double(r.plain_distance) << '\n'
        << "iteration_agrees," << (r.iteration_agrees ? "yes" : "no") << '\n';
    if (!r.iteration_agrees) throw NumericalError("iteration disagrees with the spectral gaps");
    return kExitOk;
  });
}

int cmd_isospectral(const IsospectralOptions& o, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const MetricGraph a = read_graph_file(o.first);
    const MetricGraph b = read_graph_file(o.second);
    const IsospectralReport r = isospectral_compare(a, b, o.n, o.tol, o.cutoff);
    out << "index,first,second,difference\n";
    int first_mismatch = 0;
    for (int i = 0; i < r.compared; ++i) {
      const double d = r.first[i] - r.second[i];
      if (first_mismatch == 0 && std::abs(d) > o.tol) first_mismatch = i + 1;
      out << i + 1 << ',' << format_double(r.first[i]) << ',' << format_double(r.second[i])
          << ',' << format_double(d) << '\n';
    }
    out << "eigenvalues_match," << (r.eigenvalues_match ? "yes" : "no") << '\n';
    if (first_mismatch > 0) out << "first_mismatch," << first_mismatch << '\n';
    out << "length_cutoff," << format_double(r.cutoff) << '\n'
        << "length,count_first,count_second,amplitude_first_re,amplitude_first_im,"
           "amplitude_second_re,amplitude_second_im\n";
    for (const auto& d : r.length_differences) {
      out << format_double(d.length) << ',' << d.count_first << ',' << d.count_second << ','
          << format_double(d.amplitude_first.real()) << ','
          << format_double(d.amplitude_first.imag()) << ','
          << format_double(d.amplitude_second.real()) << ','
          << format_double(d.amplitude_second.imag()) << '\n';
    }
    out << "length_spectra_match," << (r.length_differences.empty() ? "yes" : "no") << '\n';
    return kExitOk;
  });
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Spectra, orbits and classical dynamics of metric graphs"};
  app.require_subcommand(1);

  SpectrumOptions spectrum;
  auto* sp = app.add_subcommand("spectrum", "eigenvalues up to --kmax");
  sp->add_option("graph", spectrum.graph, "graph file")->required();
  sp->add_option("--kmax", spectrum.k_max, "largest wavenumber")->check(CLI::PositiveNumber);
  sp->add_option("--tol", spectrum.tol, "root tolerance")->check(CLI::PositiveNumber);
  sp->add_option("--method", spectrum.method, "secular function")
      ->check(CLI::IsMember({"det", "real", "vertex", "star"}));
  sp->add_option("--csv", spectrum.csv, "write a (k, zeta) sampling here");

  CountingOptions counting;
  auto* cp = app.add_subcommand("counting", "trace formula against the direct count");
  cp->add_option("graph", counting.graph, "graph file")->required();
  cp->add_option("--k", counting.k, "wavenumber")->required();
  cp->add_option("--epsilon", counting.epsilon, "imaginary shift");

  OrbitsOptions orbits;
  double max_length = 0.0;
  int max_period = 0;
  auto* op = app.add_subcommand("orbits", "periodic orbit table");
  op->add_option("graph", orbits.graph, "graph file")->required();
  auto* ml = op->add_option("--max-length", max_length, "length cutoff")->check(CLI::PositiveNumber);
  auto* mp = op->add_option("--max-period", max_period, "period cutoff")->check(CLI::PositiveNumber);
  ml->excludes(mp);
  op->add_option("--k", orbits.k, "wavenumber for amplitudes");
  op->add_option("--csv", orbits.csv, "also write the table here");

  ReconstructOptions reconstruct;
  auto* rp = app.add_subcommand("reconstruct", "graph from an orbit length list");
  rp->add_option("list", reconstruct.list, "length list file")->required();
  rp->add_flag("--directed", reconstruct.directed, "count time-reversed orbits separately");

  DynamicsOptions dynamics;
  auto* dp = app.add_subcommand("dynamics", "classical Markov map and its classification");
  dp->add_option("graph", dynamics.graph, "graph file")->required();
  dp->add_option("--k", dynamics.k, "wavenumber");

  IsospectralOptions iso;
  auto* ip = app.add_subcommand("isospectral", "compare eigenvalues and length spectra");
  ip->add_option("first", iso.first, "graph file")->required();
  ip->add_option("second", iso.second, "graph file")->required();
  ip->add_option("--n", iso.n, "eigenvalues to compare")->check(CLI::PositiveNumber);
  ip->add_option("--tol", iso.tol, "eigenvalue tolerance")->check(CLI::NonNegativeNumber);
  ip->add_option("--cutoff", iso.cutoff, "length cutoff, 0 for twice the larger total length");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << '\n' << app.help();
    return kExitParse;
  }

  if (*sp) return cmd_spectrum(spectrum, out, err);
  if (*cp) return cmd_counting(counting, out, err);
  if (*op) {
    if (*ml) orbits.max_length = max_length;
    if (*mp) orbits.max_period = max_period;
    return cmd_orbits(orbits, out, err);
  }
  if (*rp) return cmd_reconstruct(reconstruct, out, err);
  if (*dp) return cmd_dynamics(dynamics, out, err);
  if (*ip) return cmd_isospectral(iso, out, err);
  return kExitParse;
}

}  // namespace qgraph
