#include "qgraph/rational.hpp"

#include <charconv>
#include <stdexcept>

namespace qgraph {

namespace {

bool parse_int(std::string_view s, std::int64_t& out) {
  if (s.empty()) return false;
  if (s.front() == '+') s.remove_prefix(1);
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc{} && ptr == s.data() + s.size();
}

}  // namespace

bool try_parse_rational(std::string_view text, Rational& out) {
  const auto slash = text.find('/');
  std::int64_t num = 0;
  std::int64_t den = 1;
  if (slash == std::string_view::npos) {
    if (!parse_int(text, num)) return false;
  } else {
    if (!parse_int(text.substr(0, slash), num)) return false;
    if (!parse_int(text.substr(slash + 1), den)) return false;
    if (den == 0) return false;
  }
  out = Rational(num, den);
  return true;
}

Rational parse_rational(std::string_view text) {
  Rational r;
  if (!try_parse_rational(text, r)) {
    throw std::invalid_argument("not a rational number: '" + std::string(text) + "'");
  }
  return r;
}

std::string to_string(const Rational& r) {
  if (r.denominator() == 1) return std::to_string(r.numerator());
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

}  // namespace qgraph
