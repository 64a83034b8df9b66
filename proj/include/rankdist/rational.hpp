#pragma once

// Exact integer and rational scalars used by every exact computation.
// Both are thin aliases over GMP's C++ classes: mpq_class keeps its value in
// lowest terms with a positive denominator after every arithmetic operation.

#include <gmpxx.h>

#include <stdexcept>
#include <string>

namespace rankdist {

using BigInt = mpz_class;
using ExactRational = mpq_class;

inline ExactRational make_rational(const BigInt& num, const BigInt& den)
{
    if (den == 0) {
        throw std::domain_error("rational with zero denominator");
    }
    ExactRational q(num, den);
    q.canonicalize();
    return q;
}

inline BigInt factorial(unsigned long n)
{
    BigInt r;
    mpz_fac_ui(r.get_mpz_t(), n);
    return r;
}

/// m!! = m (m-2) (m-4) ..., with m!! = 1 for m <= 0.
inline BigInt double_factorial(long m)
{
    if (m <= 0) {
        return 1;
    }
    BigInt r;
    mpz_2fac_ui(r.get_mpz_t(), static_cast<unsigned long>(m));
    return r;
}

inline BigInt pow2(unsigned long e)
{
    BigInt r;
    mpz_ui_pow_ui(r.get_mpz_t(), 2, e);
    return r;
}

/// "p/q", or "p" when the denominator is 1.
inline std::string to_string(const ExactRational& q) { return q.get_str(); }
inline std::string to_string(const BigInt& z) { return z.get_str(); }

/// Parses "p/q" or "p"; throws std::invalid_argument on malformed text.
inline ExactRational parse_rational(const std::string& text)
{
    ExactRational q;
    if (text.empty() || q.set_str(text, 10) != 0) {
        throw std::invalid_argument("not a rational: '" + text + "'");
    }
    if (q.get_den() == 0) {
        throw std::invalid_argument("zero denominator: '" + text + "'");
    }
    q.canonicalize();
    return q;
}

} // namespace rankdist
