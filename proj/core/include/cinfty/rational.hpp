#pragma once

#include <gmpxx.h>

#include <stdexcept>
#include <string>

namespace cinfty {

// Every scalar in this library is an exact rational; there is no floating
// point anywhere. mpq_class keeps values canonical (lowest terms, positive
// denominator) after every operation.
using Rational = mpq_class;

struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct AxiomError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Accepts "a" or "a/b" with optional leading '-'. Rejects zero denominators.
Rational parse_rational(const std::string& text);

// Lowest terms, "a" when the denominator is 1, otherwise "a/b".
std::string rational_str(const Rational& r);

// Rough size of a rational: bit lengths of numerator and denominator.
// Used as the pivot-selection heuristic in row reduction.
std::size_t rational_bits(const Rational& r);

}  // namespace cinfty
