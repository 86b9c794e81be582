#include "qgraph/graph_io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "qgraph/errors.hpp"

namespace qgraph {

namespace {

std::vector<std::string> tokens_of(const std::string& raw) {
  const std::string line = raw.substr(0, raw.find('#'));
  std::istringstream in(line);
  std::vector<std::string> out;
  for (std::string t; in >> t;) out.push_back(t);
  return out;
}

double parse_decimal(const std::string& s, int line, const char* what) {
  double x = 0.0;
  const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), x);
  if (ec != std::errc() || end != s.data() + s.size()) {
    throw ParseError(line, std::string("bad ") + what + " '" + s + "'");
  }
  return x;
}

template <class F>
void for_each_line(const std::string& text, F&& f) {
  std::istringstream in(text);
  int n = 0;
  for (std::string raw; std::getline(in, raw);) {
    ++n;
    auto toks = tokens_of(raw);
    if (!toks.empty()) f(n, toks);
  }
}

}  // namespace

std::string format_double(double x) {
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

GraphDescription parse_graph_text(const std::string& text) {
  GraphDescription d;
  std::vector<int> vertex_lines;
  std::vector<int> edge_lines;
  for_each_line(text, [&](int line, const std::vector<std::string>& t) {
    if (t[0] == "vertex") {
      if (t.size() < 3) throw ParseError(line, "expected 'vertex <name> <condition>'");
      VertexSpec v{t[1], {}};
      if (t[2] == "neumann" && t.size() == 3) {
        v.condition = VertexCondition::neumann();
      } else if (t[2] == "dirichlet" && t.size() == 3) {
        v.condition = VertexCondition::dirichlet();
      } else if (t[2] == "delta" && t.size() == 4) {
        v.condition = VertexCondition::delta(parse_decimal(t[3], line, "coupling"));
      } else {
        throw ParseError(line, "expected neumann, dirichlet or delta <alpha>");
      }
      for (const auto& w : d.vertices) {
        if (w.name == v.name) throw ParseError(line, "duplicate vertex '" + v.name + "'");
      }
      d.vertices.push_back(v);
      vertex_lines.push_back(line);
    } else if (t[0] == "edge") {
      if (t.size() != 4) throw ParseError(line, "expected 'edge <a> <b> <length>'");
      EdgeSpec e{t[1], t[2], 0.0, std::nullopt};
      for (const std::string& name : {e.a, e.b}) {
        bool known = false;
        for (const auto& w : d.vertices) known = known || w.name == name;
        if (!known) throw ParseError(line, "undeclared vertex '" + name + "'");
      }
      Rational r;
      if (try_parse_rational(t[3], r)) {
        e.exact_length = r;
        e.length = to_double(r);
      } else {
        e.length = parse_decimal(t[3], line, "length");
      }
      if (!(e.length > 0.0)) throw ParseError(line, "edge length must be positive");
      d.edges.push_back(e);
      edge_lines.push_back(line);
    } else {
      throw ParseError(line, "unknown declaration '" + t[0] + "'");
    }
  });
  // Structural checks that need the whole file.
  try {
    build_graph(d);
  } catch (const GraphError& err) {
    const int line = d.edges.empty() ? (vertex_lines.empty() ? 0 : vertex_lines.back())
                                     : edge_lines.back();
    throw ParseError(line, err.what());
  }
  return d;
}

MetricGraph read_graph_file(const std::string& path) {
  return build_graph(parse_graph_text(read_text_file(path)));
}

std::string render_graph_text(const GraphDescription& d) {
  std::ostringstream out;
  for (const auto& v : d.vertices) {
    out << "vertex " << v.name << ' ';
    switch (v.condition.kind) {
      case VertexKind::Neumann:
        out << "neumann";
        break;
      case VertexKind::Dirichlet:
        out << "dirichlet";
        break;
      case VertexKind::Delta:
        out << "delta " << format_double(v.condition.alpha);
        break;
    }
    out << '\n';
  }
  for (const auto& e : d.edges) {
    out << "edge " << e.a << ' ' << e.b << ' '
        << (e.exact_length ? to_string(*e.exact_length) : format_double(e.length)) << '\n';
  }
  return out.str();
}

LengthList parse_length_list(const std::string& text) {
  LengthList list;
  bool have_total = false;
  for_each_line(text, [&](int line, const std::vector<std::string>& t) {
    Rational r;
    if (!have_total) {
      if (t.size() != 2 || t[0] != "total" || !try_parse_rational(t[1], r)) {
        throw ParseError(line, "expected 'total <rational>'");
      }
      if (r <= Rational(0)) throw ParseError(line, "total length must be positive");
      list.total = r;
      have_total = true;
      return;
    }
    if (t.size() != 1 || !try_parse_rational(t[0], r)) {
      throw ParseError(line, "expected one rational length");
    }
    if (r <= Rational(0)) throw ParseError(line, "orbit length must be positive");
    list.lengths.push_back(r);
  });
  if (!have_total) throw ParseError(1, "missing 'total' line");
  if (list.lengths.empty()) throw ParseError(1, "no orbit lengths");
  return list;
}

LengthList read_length_list_file(const std::string& path) {
  return parse_length_list(read_text_file(path));
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(0, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace qgraph
