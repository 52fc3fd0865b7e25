#pragma once

#include <cstdint>

#include "limbs/angle.hpp"

namespace limbs {

/// splitmix64: tiny deterministic generator, identical across platforms
/// (std distributions are not), used wherever reports must be reproducible.
struct SplitMix64 {
    std::uint64_t state = 0x9e3779b97f4a7c15ull;

    explicit SplitMix64(std::uint64_t seed = 1) : state(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    std::uint64_t below(std::uint64_t n) { return n ? next() % n : 0; }

    double unit() { return (next() >> 11) * 0x1.0p-53; }
};

/// Random rational angle with binary preperiod <= max_pre and period <=
/// max_per: denominators stay within the 2^a (2^m - 1) family, which keeps
/// doubling orbits short and exact arithmetic fast.
inline Angle random_angle(SplitMix64& rng, int max_pre = 16, int max_per = 16) {
    int l = static_cast<int>(rng.below(static_cast<std::uint64_t>(max_pre) + 1));
    int m = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(max_per)));
    BigInt pre = 0;
    for (int i = 0; i < l; ++i) pre = pre * 2 + static_cast<long>(rng.below(2));
    BigInt per = 0;
    for (int i = 0; i < m; ++i) per = per * 2 + static_cast<long>(rng.below(2));
    Rational v = make_rational(pre, pow_int(2, static_cast<unsigned long>(l)));
    v += make_rational(per, pow_int(2, static_cast<unsigned long>(m)) - 1) /
         Rational(pow_int(2, static_cast<unsigned long>(l)));
    return Angle(v);
}

/// Random angle strictly inside (lo, hi), dyadic interpolation (30 random
/// bits), so the odd part of the denominator comes from the endpoints only.
inline Angle random_angle_between(SplitMix64& rng, const Angle& lo, const Angle& hi,
                                  int bits = 30) {
    Rational width = hi.value() - lo.value();
    BigInt k = 1 + BigInt(static_cast<unsigned long>(
                    rng.below((1ull << bits) - 2)));
    Rational u = make_rational(k, pow_int(2, static_cast<unsigned long>(bits)));
    return Angle(lo.value() + width * u);
}

} // namespace limbs
