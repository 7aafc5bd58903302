#pragma once

#include <gmpxx.h>

#include <cctype>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace recurlab {

/// Exact rational scalar used throughout the library.  All averaging,
/// convolution and conditional-expectation code is closed over this type;
/// floating point never enters any of those paths.
using Rat = mpq_class;

struct DomainError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// A named hypothesis of an operation does not hold for the given input
/// (non-ergodic system, non-magic system, mismatched projection, ...).
struct PreconditionError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// An averaging scheme fails its convergence validation; `what()` carries
/// the defect report.
struct ConvergenceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ParseError : std::runtime_error {
  std::string location;
  ParseError(std::string loc, const std::string& msg)
      : std::runtime_error(loc + ": " + msg), location(std::move(loc)) {}
};

inline Rat rat_of(long num, long den = 1) {
  if (den == 0) throw DomainError("rational with zero denominator");
  Rat r(num, den);
  r.canonicalize();
  return r;
}

/// Parses "p/q" or "p" (optional sign, base 10).  Used by every JSON reader.
inline Rat parse_rat(const std::string& s) {
  if (s.empty()) throw ParseError("rational", "empty string");
  for (char c : s)
    if (!(std::isdigit(static_cast<unsigned char>(c)) || c == '/' || c == '-' || c == '+'))
      throw ParseError("rational '" + s + "'", "unexpected character");
  mpq_t q;
  mpq_init(q);
  if (mpq_set_str(q, s.c_str(), 10) != 0 || mpz_sgn(mpq_denref(q)) == 0) {
    mpq_clear(q);
    throw ParseError("rational '" + s + "'", "not a valid p/q literal");
  }
  mpq_canonicalize(q);
  Rat r(q);
  mpq_clear(q);
  return r;
}

/// Canonical "p/q" (or "p" when the denominator is 1); inverse of parse_rat.
inline std::string rat_str(const Rat& r) { return r.get_str(); }

inline Rat rat_abs(const Rat& r) { return r < 0 ? Rat(-r) : r; }

inline double rat_double(const Rat& r) { return r.get_d(); }

}  // namespace recurlab
