#pragma once

#include <gmpxx.h>

#include <string>

namespace prefattach {

using Rational = mpq_class;
using BigInt = mpz_class;

// Always "p/q", including integral values ("1/1", "0/1").
inline std::string to_fraction_string(const Rational& value) {
    return value.get_num().get_str() + "/" + value.get_den().get_str();
}

// Accepts "p/q" or a plain integer.
inline Rational parse_fraction(const std::string& text) {
    Rational value(text, 10);
    value.canonicalize();
    return value;
}

}  // namespace prefattach
