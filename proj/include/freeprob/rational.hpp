#pragma once

#include <gmpxx.h>

#include <stdexcept>
#include <string>

namespace freeprob {

using Rational = mpq_class;

/// Parses "num/den" or "num". Throws std::invalid_argument on malformed
/// input or a zero denominator.
Rational parse_rational(const std::string& text);

/// Always emits the explicit "num/den" form, e.g. "3/2", "-1/4", "2/1".
std::string rational_str(const Rational& q);

inline Rational rat(long num, long den = 1) {
    if (den == 0) throw std::invalid_argument("zero denominator");
    Rational q(num, den);
    q.canonicalize();
    return q;
}

inline double to_double(const Rational& q) { return q.get_d(); }

}  // namespace freeprob
