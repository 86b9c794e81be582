#pragma once

#include <iosfwd>
#include <optional>
#include <string>

namespace qgraph {

// Exit codes shared by every command.
inline constexpr int kExitOk = 0;
inline constexpr int kExitParse = 1;
inline constexpr int kExitNumeric = 2;
inline constexpr int kExitInfeasible = 3;

struct SpectrumOptions {
  std::string graph;
  double k_max = 20.0;
  double tol = 1e-12;
  std::string method = "real";  // det | real | vertex | star
  std::string csv;              // (k, secular_real) sampling when set
};

struct CountingOptions {
  std::string graph;
  double k = 10.0;
  double epsilon = 1e-6;
};

struct OrbitsOptions {
  std::string graph;
  std::optional<double> max_length;
  std::optional<int> max_period;
  double k = 1.0;
  std::string csv;
};

struct ReconstructOptions {
  std::string list;
  bool directed = false;  // count an orbit and its reverse separately
};

struct DynamicsOptions {
  std::string graph;
  double k = 1.0;
};

struct IsospectralOptions {
  std::string first;
  std::string second;
  int n = 10;
  double tol = 1e-8;
  double cutoff = 0.0;
};

// Each command writes its table to out and diagnostics to err, and returns an exit code.
int cmd_spectrum(const SpectrumOptions& o, std::ostream& out, std::ostream& err);
int cmd_counting(const CountingOptions& o, std::ostream& out, std::ostream& err);
int cmd_orbits(const OrbitsOptions& o, std::ostream& out, std::ostream& err);
int cmd_reconstruct(const ReconstructOptions& o, std::ostream& out, std::ostream& err);
int cmd_dynamics(const DynamicsOptions& o, std::ostream& out, std::ostream& err);
int cmd_isospectral(const IsospectralOptions& o, std::ostream& out, std::ostream& err);

// Parses argv with CLI11 and dispatches; a usage error returns kExitParse.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace qgraph
