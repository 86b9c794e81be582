#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "qgraph/commands.hpp"
#include "qgraph/errors.hpp"
#include "qgraph/graph_io.hpp"
#include "qgraph/orbits.hpp"

namespace qgraph {
namespace {

std::string data(const std::string& name) { return std::string(QGRAPH_TEST_DATA) + "/" + name; }

struct CliRun {
  int code = 0;
  std::string out, err;
};

CliRun run(std::vector<std::string> args) {
  args.insert(args.begin(), "qgraph");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  CliRun r;
  r.code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::vector<std::vector<std::string>> csv_rows(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) {
    std::vector<std::string> row;
    std::istringstream ls(line);
    for (std::string cell; std::getline(ls, cell, ',');) row.push_back(cell);
    rows.push_back(row);
  }
  return rows;
}

std::string value_of(const std::string& text, const std::string& key) {
  for (const auto& row : csv_rows(text)) {
    if (row.size() == 2 && row[0] == key) return row[1];
  }
  return "";
}

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("qgraph_test_" + name);
}

TEST(GraphFile, ParsesConditionsAndLengths) {
  const auto d = parse_graph_text(
      "# comment\nvertex a dirichlet\nvertex m delta -2.5  # trailing\nvertex b neumann\n"
      "edge a m 3/7\nedge m b 0.25\n");
  ASSERT_EQ(d.vertices.size(), 3u);
  EXPECT_EQ(d.vertices[1].condition, VertexCondition::delta(-2.5));
  EXPECT_EQ(*d.edges[0].exact_length, Rational(3, 7));
  EXPECT_FALSE(d.edges[1].exact_length.has_value());
  EXPECT_DOUBLE_EQ(d.edges[1].length, 0.25);
}

TEST(GraphFile, ErrorsCarryLineNumbers) {
  const std::pair<const char*, int> cases[] = {
      {"vertex a dirichlet\nvertex b dirichlet\n\nedge a b\n", 4},
      {"vertex a neumann\nvertex a neumann\n", 2},
      {"vertex a robin\n", 1},
      {"vertex a neumann\nedge a c 1\n", 2},
      {"vertex a neumann\nvertex b neumann\nedge a b -1\n", 3},
      {"vertex a neumann\nvertex b neumann\nedge a b 1/0\n", 3},
      {"vertex a neumann\nvertex b neumann\nedge a b 1\nhedge a b 1\n", 4},
  };
  for (const auto& [text, line] : cases) {
    try {
      parse_graph_text(text);
      ADD_FAILURE() << "accepted: " << text;
    } catch (const ParseError& e) {
      EXPECT_EQ(e.line(), line) << e.what();
    }
  }
}

TEST(GraphFile, RoundTripKeepsExactLengths) {
  for (const char* name : {"interval.graph", "tree.graph", "three_star.graph",
                           "dirichlet_star.graph", "delta_interval.graph", "path.graph"}) {
    const auto d1 = parse_graph_text(read_text_file(data(name)));
    const std::string text = render_graph_text(d1);
    const auto d2 = parse_graph_text(text);
    EXPECT_TRUE(d1 == d2) << name;
    EXPECT_EQ(render_graph_text(d2), text);
  }
  const auto d = parse_graph_text(read_text_file(data("path.graph")));
  EXPECT_NE(render_graph_text(d).find("edge v w 3/2"), std::string::npos);
}

TEST(LengthFile, ParsesAndValidates) {
  const auto l = parse_length_list(read_text_file(data("puzzle_a.lengths")));
  EXPECT_EQ(l.total, Rational(11, 6));
  EXPECT_EQ(l.lengths.size(), 11u);
  EXPECT_THROW(parse_length_list("2\n3\n"), ParseError);
  EXPECT_THROW(parse_length_list("total 1\n-2\n"), ParseError);
  EXPECT_THROW(parse_length_list("total 0\n2\n"), ParseError);
}

TEST(Cli, IntervalThirteenZeros) {
  const CliRun r = run({"spectrum", data("interval.graph"), "--kmax", "45"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rows = csv_rows(r.out);
  ASSERT_GE(rows.size(), 14u);
  EXPECT_EQ(rows[0], (std::vector<std::string>{"k", "multiplicity", "eigenvalue"}));
  for (int n = 1; n <= 13; ++n) {
    EXPECT_NEAR(std::stod(rows[n][0]), n * std::acos(-1.0), 1e-10);
    EXPECT_EQ(rows[n][1], "1");
  }
}

TEST(Cli, VertexAndDetTablesAgreeOnStar) {
  const CliRun a = run({"spectrum", data("three_star.graph"), "--kmax", "30", "--method", "vertex"});
  const CliRun b = run({"spectrum", data("three_star.graph"), "--kmax", "30", "--method", "det"});
  ASSERT_EQ(a.code, 0) << a.err;
  ASSERT_EQ(b.code, 0) << b.err;
  const auto ra = csv_rows(a.out);
  const auto rb = csv_rows(b.out);
  ASSERT_EQ(ra.size(), rb.size());
  for (std::size_t i = 1; i < ra.size(); ++i) {
    EXPECT_NEAR(std::stod(ra[i][0]), std::stod(rb[i][0]), 1e-9);
    EXPECT_EQ(ra[i][1], rb[i][1]);
  }
}

TEST(Cli, StarMethodOnDirichletStar) {
  const CliRun a = run({"spectrum", data("dirichlet_star.graph"), "--kmax", "20", "--method", "star"});
  const CliRun b = run({"spectrum", data("dirichlet_star.graph"), "--kmax", "20", "--method", "real"});
  ASSERT_EQ(a.code, 0) << a.err;
  const auto ra = csv_rows(a.out);
  const auto rb = csv_rows(b.out);
  ASSERT_EQ(ra.size(), rb.size());
  for (std::size_t i = 1; i < ra.size(); ++i) {
    EXPECT_NEAR(std::stod(ra[i][0]), std::stod(rb[i][0]), 1e-9);
  }
}

TEST(Cli, SpectrumCsvIsDeterministic) {
  const auto p1 = temp_file("s1.csv");
  const auto p2 = temp_file("s2.csv");
  const CliRun a = run({"spectrum", data("delta_interval.graph"), "--kmax", "10", "--csv", p1.string()});
  const CliRun b = run({"spectrum", data("delta_interval.graph"), "--kmax", "10", "--csv", p2.string()});
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(a.out, b.out);
  const std::string c1 = read_text_file(p1.string());
  EXPECT_EQ(c1, read_text_file(p2.string()));
  const auto rows = csv_rows(c1);
  EXPECT_EQ(rows[0], (std::vector<std::string>{"k", "zeta"}));
  EXPECT_GE(rows.size(), 2001u);
  // Sign changes of the sampling match the root table.
  int changes = 0;
  for (std::size_t i = 2; i < rows.size(); ++i) {
    changes += (std::stod(rows[i - 1][1]) > 0) != (std::stod(rows[i][1]) > 0);
  }
  EXPECT_EQ(changes, static_cast<int>(csv_rows(a.out).size()) - 1);
  std::filesystem::remove(p1);
  std::filesystem::remove(p2);
}

TEST(Cli, MalformedFileExitsWithLine) {
  const CliRun r = run({"spectrum", data("malformed.graph")});
  EXPECT_EQ(r.code, kExitParse);
  EXPECT_NE(r.err.find("line 4"), std::string::npos) << r.err;
}

TEST(Cli, UsageErrorsExitOne) {
  EXPECT_EQ(run({}).code, kExitParse);
  EXPECT_EQ(run({"spectrum"}).code, kExitParse);
  EXPECT_EQ(run({"spectrum", data("interval.graph"), "--method", "bogus"}).code, kExitParse);
  EXPECT_EQ(run({"orbits", data("interval.graph")}).code, kExitParse);
  EXPECT_EQ(run({"orbits", data("interval.graph"), "--max-period", "2", "--max-length", "3"}).code,
            kExitParse);
}

TEST(Cli, CountingOnCircle) {
  const CliRun r = run({"counting", data("circle.graph"), "--k", "10"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(value_of(r.out, "N0"), "0");
  EXPECT_EQ(value_of(r.out, "direct"), "3");
  EXPECT_NEAR(std::stod(value_of(r.out, "formula")), 3.0, 0.01);
}

TEST(Cli, CountingTreeConstantIsExact) {
  const CliRun r = run({"counting", data("tree.graph"), "--k", "7.3"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(value_of(r.out, "N0"), "1/2");
}

TEST(Cli, CountingRejectsZeroEpsilon) {
  const CliRun r = run({"counting", data("circle.graph"), "--k", "10", "--epsilon", "0"});
  EXPECT_EQ(r.code, kExitParse);
  EXPECT_NE(r.err.find("epsilon"), std::string::npos);
}

TEST(Cli, TetrahedronPeriodFiveRowsArePrimitive) {
  const CliRun r = run({"orbits", data("tetrahedron.graph"), "--max-period", "5"});
  ASSERT_EQ(r.code, 0) << r.err;
  int five = 0;
  for (const auto& row : csv_rows(r.out)) {
    if (row[1] != "5") continue;
    ++five;
    EXPECT_EQ(row[2], "5");
    EXPECT_EQ(row[3], "1");
  }
  EXPECT_EQ(five, count_orbits_trace(build_graph(parse_graph_text(read_text_file(data(
                                         "tetrahedron.graph")))),
                                     5)
                      .total);
}

TEST(Cli, IntervalOrbitRows) {
  const CliRun r = run({"orbits", data("interval.graph"), "--max-period", "4"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rows = csv_rows(r.out);
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_EQ(rows[0], (std::vector<std::string>{"rep", "n", "n_p", "r", "length", "length_exact",
                                                "amplitude_re", "amplitude_im"}));
  EXPECT_EQ(rows[1][1], "2");
  EXPECT_EQ(rows[1][3], "1");
  EXPECT_EQ(rows[2][1], "4");
  EXPECT_EQ(rows[2][3], "2");
  EXPECT_EQ(rows[2][5], "4");
  EXPECT_DOUBLE_EQ(std::stod(rows[2][6]), 1.0);
}

TEST(Cli, PathOrbitLengthsMatchPuzzleList) {
  const auto csv = temp_file("orbits.csv");
  const CliRun r = run({"orbits", data("path.graph"), "--max-length", "5", "--csv", csv.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  std::vector<std::string> lengths;
  for (const auto& row : csv_rows(r.out)) lengths.push_back(row[5]);
  EXPECT_EQ(lengths, (std::vector<std::string>{"length_exact", "2/3", "4/3", "2", "8/3", "3",
                                               "10/3", "11/3", "4", "13/3", "14/3", "5"}));
  EXPECT_EQ(read_text_file(csv.string()), r.out);
  std::filesystem::remove(csv);
}

TEST(Cli, ReconstructPuzzleA) {
  const CliRun r = run({"reconstruct", data("puzzle_a.lengths")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("# missing: none"), std::string::npos);
  EXPECT_NE(r.out.find("# extra: none"), std::string::npos);
  // The printed graph is itself a valid graph file.
  const MetricGraph g = build_graph(parse_graph_text(r.out));
  EXPECT_TRUE(isomorphic(g, build_graph(parse_graph_text(read_text_file(data("path.graph"))))));
}

TEST(Cli, ReconstructPuzzleBReportsClosestGraph) {
  const CliRun r = run({"reconstruct", data("puzzle_b.lengths")});
  EXPECT_EQ(r.code, kExitInfeasible);
  EXPECT_NE(r.err.find("no consistent graph"), std::string::npos);
  EXPECT_NE(r.out.find("# extra: 13/3"), std::string::npos) << r.out;
}

TEST(Cli, ReconstructInconsistentList) {
  const CliRun r = run({"reconstruct", data("inconsistent.lengths")});
  EXPECT_EQ(r.code, kExitInfeasible);
  EXPECT_NE(r.err.find("no consistent graph"), std::string::npos);
}

TEST(Cli, DynamicsClassifications) {
  const std::pair<const char*, const char*> cases[] = {
      {"interval.graph", "ergodic_not_mixing"},
      {"tetrahedron.graph", "mixing"},
      {"two_intervals.graph", "not_ergodic"},
  };
  for (const auto& [file, expected] : cases) {
    const CliRun r = run({"dynamics", data(file)});
    ASSERT_EQ(r.code, 0) << file << r.err;
    EXPECT_EQ(value_of(r.out, "classification"), expected);
    EXPECT_EQ(value_of(r.out, "iteration_agrees"), "yes");
    EXPECT_LT(std::stod(value_of(r.out, "bistochastic_defect")), 1e-12);
  }
  EXPECT_GT(std::stod(value_of(run({"dynamics", data("tetrahedron.graph")}).out, "gap_modulus")),
            0.0);
}

TEST(Cli, IsospectralSameFile) {
  const CliRun r = run({"isospectral", data("tree.graph"), data("tree.graph"), "--n", "8"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(value_of(r.out, "eigenvalues_match"), "yes");
  EXPECT_EQ(value_of(r.out, "length_spectra_match"), "yes");
  EXPECT_EQ(value_of(r.out, "first_mismatch"), "");
}

TEST(Cli, IsospectralIntervalAgainstCircle) {
  const CliRun r = run({"isospectral", data("interval.graph"), data("circle.graph"), "--n", "4"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(value_of(r.out, "eigenvalues_match"), "no");
  EXPECT_EQ(value_of(r.out, "first_mismatch"), "1");
  EXPECT_EQ(value_of(r.out, "length_spectra_match"), "no");
}

TEST(Cli, OutputIsDeterministic) {
  for (const std::vector<std::string>& args :
       {std::vector<std::string>{"orbits", data("tetrahedron.graph"), "--max-period", "4"},
        std::vector<std::string>{"dynamics", data("three_star.graph")},
        std::vector<std::string>{"counting", data("tree.graph"), "--k", "5"}}) {
    EXPECT_EQ(run(args).out, run(args).out);
  }
}

}  // namespace
}  // namespace qgraph
