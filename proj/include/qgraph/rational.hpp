#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include <boost/rational.hpp>

namespace qgraph {

using Rational = boost::rational<std::int64_t>;

// Accepts "p/q", "p" or "-p/q". Throws std::invalid_argument otherwise.
Rational parse_rational(std::string_view text);

// Returns false instead of throwing.
bool try_parse_rational(std::string_view text, Rational& out);

// "p/q", or "p" when the denominator is one.
std::string to_string(const Rational& r);

inline double to_double(const Rational& r) {
  return boost::rational_cast<double>(r);
}

}  // namespace qgraph
