#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "qgraph/graph.hpp"

namespace qgraph {

// Graph text format, one declaration per line, '#' starts a comment:
//   vertex <name> neumann | dirichlet | delta <alpha>
//   edge <name-a> <name-b> <length>
// Lengths are "p/q" or integers (kept exact) or decimals. Throws ParseError.
GraphDescription parse_graph_text(const std::string& text);
MetricGraph read_graph_file(const std::string& path);

// Inverse of parse_graph_text; exact lengths keep their p/q form, doubles get 17 digits.
std::string render_graph_text(const GraphDescription& d);

struct LengthList {
  Rational total;
  std::vector<Rational> lengths;  // in file order
};

// First non-comment line `total <rational>`, then one positive rational per line.
LengthList parse_length_list(const std::string& text);
LengthList read_length_list_file(const std::string& path);

std::string read_text_file(const std::string& path);

// 17 significant digits, '.' decimal point.
std::string format_double(double x);

}  // namespace qgraph
