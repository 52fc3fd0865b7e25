#pragma once

#include <map>
#include <vector>

#include "limbs/limb.hpp"

namespace limbs {

/// First return map of the doubling map on the truncated circle T^T:
/// q+1 expanding branches, each covering T^T once, fixing the identified
/// argument. Conjugate to multiplication by q+1 via theta_hat below.
struct FirstReturnMap {
    LimbCombinatorics limb;
    const std::vector<ReturnBranch>& branches() const { return limb.branches; }
};

namespace detail {

inline void require_surgery_q(const LimbCombinatorics& limb) {
    check(limb.q >= 3, "Unsupported",
          "surgery maps need q >= 3 (the 1/2-limb case is classical)");
}

/// Index of the branch whose half-open interval [lo, hi) contains x.
/// With this convention a shared endpoint belongs to the branch having it
/// as left endpoint.
inline std::size_t branch_index(const LimbCombinatorics& limb, const Rational& x) {
    const auto& br = limb.branches;
    for (std::size_t b = 0; b < br.size(); ++b)
        if (x >= br[b].lo && x < br[b].hi) return b;
    fail("OutsideDomain", "lifted point not in any branch (bug)");
}

/// One first-return step in the lifted frame [A, A+L).
inline Rational branch_step(const LimbCombinatorics& limb, const Rational& x, std::size_t b) {
    const ReturnBranch& br = limb.branches[b];
    return x * pow2(static_cast<unsigned long>(br.steps)) - Rational(br.offset);
}

} // namespace detail

inline FirstReturnMap build_first_return(const LimbCombinatorics& limb) {
    detail::require_surgery_q(limb);
    const auto& br = limb.branches;
    const Rational a = limb.lift_base();
    const Rational len = limb.lift_length();
    check(br.size() == static_cast<std::size_t>(limb.q + 1), "LabelingInfeasible",
          "branch table must have q+1 entries");
    check(br.front().lo == a && br.back().hi == a + len, "LabelingInfeasible",
          "branch table must span the lifted interval");
    Rational degree_sum = 0;
    for (std::size_t b = 0; b < br.size(); ++b) {
        if (b + 1 < br.size())
            check(br[b].hi == br[b + 1].lo, "LabelingInfeasible", "branches must be contiguous");
        check(br[b].steps >= 1, "LabelingInfeasible", "branch steps must be positive");
        check((br[b].hi - br[b].lo) * pow2(static_cast<unsigned long>(br[b].steps)) == len,
              "LabelingInfeasible", "each branch must cover T^T exactly once");
        check(detail::branch_step(limb, br[b].lo, b) == a, "LabelingInfeasible",
              "branch must start at the base point");
        degree_sum += make_rational(1, 1) / pow2(static_cast<unsigned long>(br[b].steps));
    }
    check(degree_sum == 1, "LabelingInfeasible", "branch widths must tile the interval");
    check(br.front().steps == limb.q && br.back().steps == limb.q, "LabelingInfeasible",
          "the V^0 branches must use 2^q");
    return FirstReturnMap{limb};
}

/// m_2^{(1)}(theta) = 2^{k_b} theta mod 1 for the branch containing theta.
inline Angle first_return_eval(const LimbCombinatorics& limb, const Angle& t) {
    detail::require_surgery_q(limb);
    Rational x = limb.lift(t);
    std::size_t b = detail::branch_index(limb, x);
    return Angle(detail::branch_step(limb, x, b));
}

inline Angle first_return_eval(const FirstReturnMap& fr, const Angle& t) {
    return first_return_eval(fr.limb, t);
}

/// Branch-index coding of a rational point's forward orbit under m_2^{(1)};
/// digits lie in {0..q}, 0-based counterclockwise from the identified point.
struct Itinerary {
    std::vector<int> preperiodic_digits;
    std::vector<int> periodic_digits;
};

inline Itinerary first_return_itinerary(const LimbCombinatorics& limb, const Angle& t) {
    detail::require_surgery_q(limb);
    Rational x = limb.lift(t);
    std::map<Rational, std::size_t> seen;
    std::vector<int> digits;
    for (;;) {
        auto it = seen.find(x);
        if (it != seen.end()) {
            Itinerary out;
            out.preperiodic_digits.assign(digits.begin(),
                                          digits.begin() + static_cast<long>(it->second));
            out.periodic_digits.assign(digits.begin() + static_cast<long>(it->second),
                                       digits.end());
            return out;
        }
        seen.emplace(x, digits.size());
        std::size_t b = detail::branch_index(limb, x);
        digits.push_back(static_cast<int>(b));
        x = detail::branch_step(limb, x, b);
    }
}

/// Orbit type of a point of T^T under the first return map.
inline OrbitType first_return_orbit_type(const LimbCombinatorics& limb, const Angle& t) {
    Itinerary it = first_return_itinerary(limb, t);
    return OrbitType{static_cast<std::int64_t>(it.preperiodic_digits.size()),
                     static_cast<std::int64_t>(it.periodic_digits.size())};
}

namespace detail {

/// Exact value of 0.d_0 d_1 ... in base b with preperiodic and periodic parts.
inline Rational digits_value(const std::vector<int>& pre, const std::vector<int>& per,
                             unsigned long base) {
    BigInt p_num = 0;
    for (int d : pre) p_num = p_num * static_cast<long>(base) + d;
    BigInt scale = pow_int(base, static_cast<unsigned long>(pre.size()));
    Rational value = make_rational(p_num, scale);
    if (!per.empty()) {
        BigInt c_num = 0;
        for (int d : per) c_num = c_num * static_cast<long>(base) + d;
        BigInt modulus = pow_int(base, static_cast<unsigned long>(per.size())) - 1;
        value += make_rational(c_num, modulus) / Rational(scale);
    }
    return value;
}

/// Base-b digit expansion of y in [0,1), terminating form (floor digits),
/// split into minimal preperiodic and periodic parts.
inline std::pair<std::vector<int>, std::vector<int>> base_digits(const Rational& y,
                                                                 unsigned long base) {
    std::map<Rational, std::size_t> seen;
    std::vector<int> digits;
    Rational u = y;
    for (;;) {
        auto it = seen.find(u);
        if (it != seen.end()) {
            std::vector<int> pre(digits.begin(), digits.begin() + static_cast<long>(it->second));
            std::vector<int> per(digits.begin() + static_cast<long>(it->second), digits.end());
            return {pre, per};
        }
        seen.emplace(u, digits.size());
        Rational scaled = u * Rational(BigInt(base));
        BigInt d = floor_of(scaled);
        digits.push_back(static_cast<int>(d.get_si()));
        u = scaled - Rational(d);
    }
}

} // namespace detail

/// The unique orientation-preserving conjugacy T^T -> T between m_2^{(1)}
/// and m_{q+1}, sending the identified argument to 0. For rational theta the
/// branch itinerary is eventually periodic and the value is exact: its
/// base-(q+1) digit expansion is the itinerary itself.
inline Angle theta_hat(const LimbCombinatorics& limb, const Angle& t) {
    Itinerary it = first_return_itinerary(limb, t);
    return Angle(detail::digits_value(it.preperiodic_digits, it.periodic_digits,
                                      static_cast<unsigned long>(limb.q + 1)));
}

/// Inverse of theta_hat: decode base-(q+1) digits of y, then invert branch
/// by branch. Each branch is affine, so the periodic tail reduces to one
/// exact linear equation and the preperiod to affine pullbacks.
inline Angle theta_hat_inv(const LimbCombinatorics& limb, const Rational& y) {
    detail::require_surgery_q(limb);
    check(y >= 0 && y <= 1, "OutsideDomain", "theta_hat_inv argument must be in [0,1]");
    if (y == 0 || y == 1) return limb.identified;

    auto [pre, per] = detail::base_digits(y, static_cast<unsigned long>(limb.q + 1));
    check(!per.empty(), "InvalidDigits", "digit expansion must have a periodic part");

    // Periodic tail: fixed point of the composed affine branch maps.
    Rational alpha = 1, beta = 0;
    for (int d : per) {
        const ReturnBranch& br = limb.branches[static_cast<std::size_t>(d)];
        Rational m = pow2(static_cast<unsigned long>(br.steps));
        alpha *= m;
        beta = beta * m + Rational(br.offset);
    }
    Rational x = beta / (alpha - 1);
    {
        // The reconstructed tail must actually follow its claimed branches.
        Rational u = x;
        for (int d : per) {
            const ReturnBranch& br = limb.branches[static_cast<std::size_t>(d)];
            check(u >= br.lo && u < br.hi, "InvalidDigits",
                  "periodic digits leave their branch (bug)");
            u = detail::branch_step(limb, u, static_cast<std::size_t>(d));
        }
        check(u == x, "InvalidDigits", "periodic tail does not close up (bug)");
    }

    // Preperiod: pull back through the branches in reverse order.
    for (auto it = pre.rbegin(); it != pre.rend(); ++it) {
        const ReturnBranch& br = limb.branches[static_cast<std::size_t>(*it)];
        x = (x + Rational(br.offset)) / pow2(static_cast<unsigned long>(br.steps));
        check(x >= br.lo && x < br.hi, "InvalidDigits",
              "preperiodic digits leave their branch (bug)");
    }
    return Angle(x);
}

/// Enclosing bounds for theta_hat at a point bracketed by rationals:
/// monotonicity gives theta_hat(lo) <= theta_hat(theta) <= theta_hat(hi)
/// for any theta in [lo, hi]. This is the supported route for irrational
/// arguments; no floating value is ever presented as exact.
inline std::pair<Angle, Angle> theta_hat_bounds(const LimbCombinatorics& limb, const Angle& lo,
                                                const Angle& hi) {
    check(limb.lift(lo) <= limb.lift(hi), "OutsideDomain",
          "bracket endpoints must be ordered along I");
    return {theta_hat(limb, lo), theta_hat(limb, hi)};
}

/// Theta_{p/q}: [theta-, theta+] -> [0,1]; endpoints go to 0 and 1, interior
/// points through m_2^{q-1} followed by theta_hat. Strictly increasing.
inline Rational theta_limb(const LimbCombinatorics& limb, const Angle& t) {
    detail::require_surgery_q(limb);
    check(limb.in_wake_interval(t), "OutsideWake",
          "angle " + t.str() + " not in the wake interval");
    if (t == limb.root_pair.first) return Rational(0);
    if (t == limb.root_pair.second) return Rational(1);
    Angle inner = double_angle_iter(t, static_cast<unsigned long>(limb.q - 1));
    return theta_hat(limb, inner).value();
}

inline Angle theta_limb_inv(const LimbCombinatorics& limb, const Rational& y) {
    detail::require_surgery_q(limb);
    check(y >= 0 && y <= 1, "OutsideWake", "theta_limb_inv argument must be in [0,1]");
    if (y == 0) return limb.root_pair.first;
    if (y == 1) return limb.root_pair.second;
    Angle inner = theta_hat_inv(limb, y);
    Rational x = limb.lift(inner);
    Rational scale = pow2(static_cast<unsigned long>(limb.q - 1));
    // Unique inverse branch of m_2^{q-1} landing in (theta-, theta+).
    BigInt j = floor_of(limb.root_pair.first.value() * scale - x) + 1;
    Rational t = (x + Rational(j)) / scale;
    check(t > limb.root_pair.first.value() && t < limb.root_pair.second.value(),
          "InvalidDigits", "inverse branch misses the wake interval (bug)");
    return Angle(t);
}

/// Theta^q_{p p'}: wake interval of p/q onto wake interval of p'/q.
inline Angle theta_interlimb(const LimbCombinatorics& from, const LimbCombinatorics& to,
                             const Angle& t) {
    check(from.q == to.q, "BadLimb", "inter-limb map needs equal q");
    return theta_limb_inv(to, theta_limb(from, t));
}

/// The involution on wake arguments: Theta^{-1}(1 - Theta(theta)).
inline Angle theta_bar(const LimbCombinatorics& limb, const Angle& t) {
    return theta_limb_inv(limb, Rational(1) - theta_limb(limb, t));
}

/// The unique argument fixed by theta_bar; rational by construction.
inline Angle symmetry_angle(const LimbCombinatorics& limb) {
    return theta_limb_inv(limb, make_rational(1, 2));
}

/// Full-circle extension of the inter-limb conjugacy: the truncated-circle
/// map on the interior of I, and its antipodal transport elsewhere. The two
/// formulas agree on the arguments of rays in V^0.
inline Angle theta_hat_full(const LimbCombinatorics& from, const LimbCombinatorics& to,
                            const Angle& t) {
    check(from.q == to.q, "BadLimb", "inter-limb map needs equal q");
    detail::require_surgery_q(from);
    auto truncated = [&](const Angle& u) {
        return theta_hat_inv(to, theta_hat(from, u).value());
    };
    bool interior = from.in_interval(t) && t != from.identified && t != from.top_endpoint();
    if (interior) return truncated(t);
    Angle shifted = t.antipode();
    check(from.in_interval(shifted) && shifted != from.identified &&
              shifted != from.top_endpoint(),
          "OutsideDomain", "antipode must land in the interior of I (bug)");
    return truncated(shifted).antipode();
}

// --- Tuning -----------------------------------------------------------

/// Purely periodic binary word of t in [0,1] (odd denominator); t = 1 is the
/// all-ones word of length 1.
inline std::vector<bool> periodic_bits(const Rational& t) {
    check(t >= 0 && t <= 1, "BadRootPair", "tuning endpoints must be in [0,1]");
    if (t == 1) return {true};
    check(BigInt(t.get_den() % 2) != 0, "BadRootPair",
          "tuning endpoint " + to_string(t) + " is not periodic under doubling");
    std::vector<bool> bits;
    Rational u = t;
    do {
        Rational doubled = u * 2;
        BigInt b = floor_of(doubled);
        bits.push_back(b == 1);
        u = doubled - Rational(b);
    } while (u != t);
    return bits;
}

inline std::pair<std::vector<bool>, std::vector<bool>> binary_expansion(const Angle& t) {
    auto [pre, per] = detail::base_digits(t.value(), 2);
    std::vector<bool> pre_b, per_b;
    for (int d : pre) pre_b.push_back(d != 0);
    for (int d : per) per_b.push_back(d != 0);
    return {pre_b, per_b};
}

/// Bit substitution 0 -> wm, 1 -> wp applied to the binary expansion of t.
inline Angle tune_words(const std::vector<bool>& wm, const std::vector<bool>& wp,
                        const Angle& t) {
    check(!wm.empty() && wm.size() == wp.size(), "BadRootPair",
          "substitution words must be nonempty and of equal length");
    auto [pre, per] = binary_expansion(t);
    std::vector<int> out_pre, out_per;
    for (bool b : pre)
        for (bool w : (b ? wp : wm)) out_pre.push_back(w ? 1 : 0);
    for (bool b : per)
        for (bool w : (b ? wp : wm)) out_per.push_back(w ? 1 : 0);
    return Angle(detail::digits_value(out_pre, out_per, 2));
}

/// Angle tuning for a root pair (t-, t+) of equal exact period under
/// doubling: substitute each bit of theta's expansion by the corresponding
/// periodic word.
inline Angle tune_angle(const Rational& t_minus, const Rational& t_plus, const Angle& t) {
    std::vector<bool> wm = periodic_bits(t_minus);
    std::vector<bool> wp = periodic_bits(t_plus);
    check(wm.size() == wp.size(), "BadRootPair", "root pair periods differ");
    return tune_words(wm, wp, t);
}

inline Angle tune_angle(const Angle& t_minus, const Angle& t_plus, const Angle& t) {
    return tune_angle(t_minus.value(), t_plus.value(), t);
}

// --- Convenience (p, q) entry points ----------------------------------

inline Angle theta_hat(long p, long q, const Angle& t) {
    return theta_hat(limb_combinatorics(p, q), t);
}
inline Angle theta_hat_inv(long p, long q, const Rational& y) {
    return theta_hat_inv(limb_combinatorics(p, q), y);
}
inline Rational theta_limb(long p, long q, const Angle& t) {
    return theta_limb(limb_combinatorics(p, q), t);
}
inline Angle theta_limb_inv(long p, long q, const Rational& y) {
    return theta_limb_inv(limb_combinatorics(p, q), y);
}
inline Angle theta_interlimb(long p, long p2, long q, const Angle& t) {
    return theta_interlimb(limb_combinatorics(p, q), limb_combinatorics(p2, q), t);
}
inline Angle theta_bar(long p, long q, const Angle& t) {
    return theta_bar(limb_combinatorics(p, q), t);
}
inline Angle symmetry_angle(long p, long q) {
    return symmetry_angle(limb_combinatorics(p, q));
}
inline Angle theta_hat_full(long p, long p2, long q, const Angle& t) {
    return theta_hat_full(limb_combinatorics(p, q), limb_combinatorics(p2, q), t);
}

} // namespace limbs
