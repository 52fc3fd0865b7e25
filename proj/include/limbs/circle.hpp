#pragma once

#include <algorithm>
#include <numeric>
#include <set>
#include <vector>

#include "limbs/angle.hpp"

namespace limbs {

struct RotationNumber {
    long p = 0;
    long q = 1;
    bool operator==(const RotationNumber&) const = default;
};

/// Combinatorial rotation number of a single cycle of the doubling map:
/// sort the cycle in circular order; doubling must advance every element by
/// the same number p of positions.
inline RotationNumber rotation_number(std::vector<Angle> cycle) {
    check(!cycle.empty(), "NotACycle", "empty cycle");
    std::sort(cycle.begin(), cycle.end());
    cycle.erase(std::unique(cycle.begin(), cycle.end()), cycle.end());
    const long q = static_cast<long>(cycle.size());

    auto position = [&](const Angle& a) -> long {
        auto it = std::lower_bound(cycle.begin(), cycle.end(), a);
        if (it == cycle.end() || *it != a) return -1;
        return static_cast<long>(it - cycle.begin());
    };

    // Invariance first: only then does the positional advance make sense.
    std::vector<long> image(static_cast<std::size_t>(q));
    for (long i = 0; i < q; ++i) {
        long j = position(multiply_angle(cycle[static_cast<std::size_t>(i)], 2));
        if (j < 0) fail("NotACycle", "doubling does not permute the set");
        image[static_cast<std::size_t>(i)] = j;
    }
    long advance = -1;
    for (long i = 0; i < q; ++i) {
        long step = (image[static_cast<std::size_t>(i)] - i + q) % q;
        if (advance < 0) advance = step;
        else if (step != advance)
            fail("NotRotational", "positional advance is not constant");
    }

    // Constant advance on a set that doubling permutes: the permutation is a
    // product of gcd(advance, q) cycles, so a genuine single cycle forces
    // gcd(p, q) = 1.
    if (std::gcd(advance, q) != 1)
        fail("NotRotational", "set is not a single rotational cycle");
    return RotationNumber{advance, q};
}

/// The unique period-q cycle of the doubling map with rotation number p/q,
/// sorted in circular (= ascending) order. All denominators divide 2^q - 1.
///
/// Construction: writing x_0 < ... < x_{q-1} for the cycle, doubling sends
/// x_i to x_{i+p mod q} and subtracts 1 exactly on the top p positions.
/// Following the index orbit around once gives x_0 * (2^q - 1) in closed form.
inline std::vector<Angle> alpha_cycle(long p, long q) {
    check(q >= 2 && p >= 1 && p < q, "BadLimb", "need 1 <= p < q, q >= 2");
    check(std::gcd(p, q) == 1, "BadLimb", "p/q must be reduced");
    check(q <= 62, "Unsupported", "q > 62 not supported");

    BigInt numerator = 0;
    long idx = 0;
    for (long j = 0; j < q; ++j) {
        if (idx >= q - p) numerator += pow_int(2, static_cast<unsigned long>(q - 1 - j));
        idx = (idx + p) % q;
    }
    const BigInt modulus = pow_int(2, static_cast<unsigned long>(q)) - 1;

    std::vector<Angle> cycle;
    cycle.reserve(static_cast<std::size_t>(q));
    Angle x(make_rational(numerator, modulus));
    for (long j = 0; j < q; ++j) {
        cycle.push_back(x);
        x = multiply_angle(x, 2);
    }
    std::sort(cycle.begin(), cycle.end());

    RotationNumber rot = rotation_number(cycle);
    check(rot.p == p && rot.q == q, "LabelingInfeasible",
          "constructed cycle has wrong rotation number (bug)");
    for (const Angle& a : cycle)
        check(BigInt(modulus % a.den()) == 0, "LabelingInfeasible",
              "cycle denominator does not divide 2^q-1 (bug)");
    return cycle;
}

} // namespace limbs
