#pragma once

#include <cstdint>
#include <string>

#include <gmpxx.h>

#include "limbs/errors.hpp"

namespace limbs {

using BigInt = mpz_class;
using Rational = mpq_class;

inline Rational make_rational(const BigInt& num, const BigInt& den) {
    check(den != 0, "BadAngle", "zero denominator");
    Rational r(num, den);
    r.canonicalize();
    return r;
}

inline Rational make_rational(long num, long den) {
    return make_rational(BigInt(num), BigInt(den));
}

inline BigInt floor_of(const Rational& x) {
    BigInt q;
    mpz_fdiv_q(q.get_mpz_t(), x.get_num().get_mpz_t(), x.get_den().get_mpz_t());
    return q;
}

/// Fractional part in [0, 1).
inline Rational frac(const Rational& x) {
    return x - Rational(floor_of(x));
}

inline BigInt pow_int(unsigned long base, unsigned long exp) {
    BigInt r;
    mpz_ui_pow_ui(r.get_mpz_t(), base, exp);
    return r;
}

inline Rational pow2(unsigned long k) {
    return Rational(pow_int(2, k));
}

inline bool is_integer(const Rational& x) { return x.get_den() == 1; }

inline double to_double(const Rational& x) { return x.get_d(); }

inline std::string to_string(const Rational& x) {
    return x.get_num().get_str() + "/" + x.get_den().get_str();
}

} // namespace limbs
