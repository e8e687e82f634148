#pragma once

#include <boost/multiprecision/gmp.hpp>
#include <optional>
#include <string>

namespace gw {

using Rat = boost::multiprecision::mpq_rational;
using Int = boost::multiprecision::mpz_int;

inline std::string to_string(const Rat& q) { return q.str(); }

// Accepts "p", "-p", "p/q".
inline std::optional<Rat> parse_rational(const std::string& s) {
  if (s.empty()) return std::nullopt;
  try {
    Rat q(s);
    return q;
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

}  // namespace gw
