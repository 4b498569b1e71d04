#pragma once

// Exact rationals are GMP's mpq_class. gmpxx keeps every arithmetic result
// canonical (lowest terms, positive denominator); values built from a
// numerator/denominator pair go through make_rational, which canonicalizes.

#include <gmpxx.h>

#include <cctype>
#include <string>
#include <string_view>

#include "hfsi/errors.hpp"

namespace hfsi {

using Rational = mpq_class;
using BigInt = mpz_class;

inline Rational make_rational(long num, long den = 1) {
    if (den == 0) throw FormatError("zero denominator");
    Rational r(num, den);
    r.canonicalize();
    return r;
}

/// "p/q" with q >= 1, always with an explicit denominator.
inline std::string to_string(const Rational& r) {
    return r.get_num().get_str() + "/" + r.get_den().get_str();
}

/// Accepts "p", "p/q", with an optional leading sign on p.
inline Rational parse_rational(std::string_view text) {
    auto is_integer = [](std::string_view s) {
        if (!s.empty() && (s.front() == '-' || s.front() == '+')) s.remove_prefix(1);
        if (s.empty()) return false;
        for (char c : s)
            if (!std::isdigit(static_cast<unsigned char>(c))) return false;
        return true;
    };
    auto slash = text.find('/');
    std::string_view num = text.substr(0, slash);
    std::string_view den = slash == std::string_view::npos ? std::string_view{"1"} : text.substr(slash + 1);
    if (!is_integer(num) || !is_integer(den) || den.front() == '-' || den.front() == '+')
        throw FormatError("bad rational literal '" + std::string(text) + "'");
    std::string n(num);
    if (n.front() == '+') n.erase(0, 1);
    BigInt p(n, 10), q(std::string(den), 10);
    if (q == 0) throw FormatError("zero denominator in '" + std::string(text) + "'");
    Rational r(p, q);
    r.canonicalize();
    return r;
}

}  // namespace hfsi
