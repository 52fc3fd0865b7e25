#pragma once

#include <utility>
#include <vector>

#include "limbs/circle.hpp"

namespace limbs {

/// Half-open circular arc [start, end), counterclockwise, with an explicit
/// wrap flag for arcs passing through 0.
struct Arc {
    Angle start;
    Angle end;
    bool wraps = false;

    static Arc between(const Angle& s, const Angle& e) {
        return Arc{s, e, e <= s};
    }

    bool contains(const Angle& t) const {
        if (!wraps) return start <= t && t < end;
        return t >= start || t < end;
    }

    Rational length() const {
        Rational d = end.value() - start.value();
        if (wraps) d += 1;
        return d;
    }

    Arc doubled() const {
        // Image under the doubling map; injective only for length < 1/2,
        // which callers must guarantee.
        return between(multiply_angle(start, 2), multiply_angle(end, 2));
    }

    Arc shifted_half() const { return between(start.antipode(), end.antipode()); }

    bool operator==(const Arc& o) const {
        return start == o.start && end == o.end && wraps == o.wraps;
    }
};

/// One branch of the first return map in the lifted frame [A, A+L], where
/// A is the lift of the identified argument and L the length of I_{p/q}.
/// The branch maps [lo, hi] onto [A, A+L] by x -> 2^steps * x - offset.
struct ReturnBranch {
    Rational lo;
    Rational hi;
    int steps = 0;
    BigInt offset; // 2^steps * lo - A, always an integer
};

/// The fully labeled combinatorial data of the limb p/q: the alpha-cycle
/// arguments, their antipodes, the truncated-circle interval, the root pair
/// bounding the wake, the region arcs, and the first-return branch table.
struct LimbCombinatorics {
    long p = 0;
    long q = 0;
    std::vector<Angle> alpha_args;       // theta~^0..theta~^{q-1}, ascending
    std::vector<Angle> alpha_prime_args; // theta^i = theta~^i + 1/2
    Angle identified;                    // bottom representative theta~^{q-1}
    Arc interval;                        // I = [theta~^{q-1}, theta~^0], wraps through 0
    std::pair<Angle, Angle> root_pair;   // (theta~^{p-1}, theta~^p)
    std::vector<std::vector<Arc>> v_arcs;      // V^0..V^{q-1}; V^0 has two arcs
    std::vector<std::vector<Arc>> vtilde_arcs; // [0] unused; V~^1..V~^{q-1}
    std::vector<ReturnBranch> branches;        // q+1 branches, lifted frame

    Rational lift_base() const { return identified.value(); } // A
    Rational lift_length() const { return interval.length(); } // L

    const Angle& top_endpoint() const { return alpha_args.front(); } // theta~^0

    /// Canonical lift of a point of I into [A, A+L). Both identified
    /// endpoint representatives lift to A.
    Rational lift(const Angle& t) const {
        const Rational& a = identified.value();
        if (t == identified || t == top_endpoint()) return a;
        if (t.value() > a) return t.value();
        if (t.value() < top_endpoint().value()) return t.value() + 1;
        fail("OutsideDomain", "angle " + t.str() + " not in I_{p/q}");
    }

    bool in_interval(const Angle& t) const {
        return t == identified || t == top_endpoint() ||
               t.value() > identified.value() ||
               t.value() < top_endpoint().value();
    }

    /// Equality of points of the truncated circle T^T: the two endpoint
    /// representatives of I name the same point.
    bool t_equal(const Angle& a, const Angle& b) const {
        if (a == b) return true;
        auto is_base = [&](const Angle& t) { return t == identified || t == top_endpoint(); };
        return is_base(a) && is_base(b);
    }

    bool in_wake_interval(const Angle& t) const {
        return root_pair.first <= t && t <= root_pair.second;
    }
};

namespace detail {

inline long mod_inverse(long a, long m) {
    long t = 0, new_t = 1, r = m, new_r = a % m;
    while (new_r != 0) {
        long quot = r / new_r;
        t -= quot * new_t;
        std::swap(t, new_t);
        r -= quot * new_r;
        std::swap(r, new_r);
    }
    if (t < 0) t += m;
    return t;
}

inline bool same_arc_set(const std::vector<Arc>& a, const std::vector<Arc>& b) {
    if (a.size() != b.size()) return false;
    for (const Arc& x : a) {
        bool found = false;
        for (const Arc& y : b)
            if (x == y) found = true;
        if (!found) return false;
    }
    return true;
}

/// Attempt the labeling where theta~^0 = cycle[r]; returns false when any
/// structural constraint fails.
inline bool try_labeling(long p, long q, const std::vector<Angle>& cycle, long r,
                         LimbCombinatorics& out) {
    LimbCombinatorics limb;
    limb.p = p;
    limb.q = q;
    for (long i = 0; i < q; ++i)
        limb.alpha_args.push_back(cycle[static_cast<std::size_t>((r + i) % q)]);
    for (const Angle& a : limb.alpha_args)
        limb.alpha_prime_args.push_back(a.antipode());

    // Labels in ascending order: the interval gap of I must contain 0.
    for (long i = 0; i + 1 < q; ++i)
        if (!(limb.alpha_args[static_cast<std::size_t>(i)] <
              limb.alpha_args[static_cast<std::size_t>(i + 1)]))
            return false;

    limb.identified = limb.alpha_args.back();
    limb.interval = Arc::between(limb.alpha_args.back(), limb.alpha_args.front());
    if (!limb.interval.wraps) return false;

    // All antipodes inside I, ascending in label order along the lift.
    const Rational a0 = limb.lift_base();
    const Rational len = limb.lift_length();
    std::vector<Rational> tlift;
    for (const Angle& t : limb.alpha_prime_args) {
        if (!limb.in_interval(t) || t == limb.identified || t == limb.top_endpoint())
            return false;
        tlift.push_back(limb.lift(t));
    }
    for (long i = 0; i + 1 < q; ++i)
        if (!(tlift[static_cast<std::size_t>(i)] < tlift[static_cast<std::size_t>(i + 1)]))
            return false;

    // Region arcs. V^0 is the symmetric critical region, two arcs adjacent
    // to the endpoints of I; V^i sits between consecutive antipodal rays;
    // V~^i between consecutive alpha rays.
    limb.v_arcs.assign(static_cast<std::size_t>(q), {});
    limb.vtilde_arcs.assign(static_cast<std::size_t>(q), {});
    limb.v_arcs[0] = {Arc::between(limb.identified, limb.alpha_prime_args[0]),
                      Arc::between(limb.alpha_prime_args[static_cast<std::size_t>(q - 1)],
                                   limb.top_endpoint())};
    for (long i = 1; i < q; ++i) {
        limb.v_arcs[static_cast<std::size_t>(i)] = {
            Arc::between(limb.alpha_prime_args[static_cast<std::size_t>(i - 1)],
                         limb.alpha_prime_args[static_cast<std::size_t>(i)])};
        limb.vtilde_arcs[static_cast<std::size_t>(i)] = {
            Arc::between(limb.alpha_args[static_cast<std::size_t>(i - 1)],
                         limb.alpha_args[static_cast<std::size_t>(i)])};
    }

    // V~^i must be the antipodal copy of V^i, and V^0 its own copy.
    for (long i = 1; i < q; ++i) {
        std::vector<Arc> shifted;
        for (const Arc& arc : limb.v_arcs[static_cast<std::size_t>(i)])
            shifted.push_back(arc.shifted_half());
        if (!same_arc_set(shifted, limb.vtilde_arcs[static_cast<std::size_t>(i)])) return false;
    }
    {
        std::vector<Arc> shifted;
        for (const Arc& arc : limb.v_arcs[0]) shifted.push_back(arc.shifted_half());
        if (!same_arc_set(shifted, limb.v_arcs[0])) return false;
    }

    // Doubling must act on the region arcs exactly as the action list says.
    for (long i = 0; i < q; ++i)
        for (const Arc& arc : limb.v_arcs[static_cast<std::size_t>(i)])
            if (!(arc.length() < make_rational(1, 2))) return false;

    for (const Arc& arc : limb.v_arcs[0])
        if (!(arc.doubled() == limb.vtilde_arcs[static_cast<std::size_t>(p)][0])) return false;
    for (long i = 1; i < q; ++i) {
        if (i == q - p) continue;
        long j = (i + p) % q;
        if (!(limb.v_arcs[static_cast<std::size_t>(i)][0].doubled() ==
              limb.vtilde_arcs[static_cast<std::size_t>(j)][0]))
            return false;
        if (!(limb.vtilde_arcs[static_cast<std::size_t>(i)][0].doubled() ==
              limb.vtilde_arcs[static_cast<std::size_t>(j)][0]))
            return false;
    }
    {
        Arc full = Arc::between(limb.identified, limb.top_endpoint());
        if (!(limb.v_arcs[static_cast<std::size_t>(q - p)][0].doubled() == full)) return false;
        if (!(limb.vtilde_arcs[static_cast<std::size_t>(q - p)][0].doubled() == full)) return false;
    }

    // Root pair: m_2^{q-1} carries [theta-, theta+] onto I endpoint to
    // endpoint with the exact affine stretch (no folding).
    limb.root_pair = {limb.alpha_args[static_cast<std::size_t>(p - 1)],
                      limb.alpha_args[static_cast<std::size_t>(p)]};
    if (!(limb.root_pair.first < limb.root_pair.second)) return false;
    if (double_angle_iter(limb.root_pair.first, static_cast<unsigned long>(q - 1)) !=
        limb.identified)
        return false;
    if (double_angle_iter(limb.root_pair.second, static_cast<unsigned long>(q - 1)) !=
        limb.top_endpoint())
        return false;
    if ((limb.root_pair.second.value() - limb.root_pair.first.value()) *
            pow2(static_cast<unsigned long>(q - 1)) !=
        len)
        return false;

    // First-return branch table: x 2^q on the two V^0 pieces, x 2^{q-N(i)}
    // between theta^{i-1} and theta^i.
    long pinv = mod_inverse(p, q);
    auto add_branch = [&](const Rational& lo, const Rational& hi, int steps) {
        Rational off = lo * pow2(static_cast<unsigned long>(steps)) - a0;
        if (!is_integer(off)) return false;
        if ((hi - lo) * pow2(static_cast<unsigned long>(steps)) != len) return false;
        limb.branches.push_back(ReturnBranch{lo, hi, steps, off.get_num()});
        return true;
    };
    if (!add_branch(a0, tlift[0], static_cast<int>(q))) return false;
    for (long i = 1; i < q; ++i) {
        long n_i = (pinv * i) % q;
        if (!add_branch(tlift[static_cast<std::size_t>(i - 1)], tlift[static_cast<std::size_t>(i)],
                        static_cast<int>(q - n_i)))
            return false;
    }
    if (!add_branch(tlift[static_cast<std::size_t>(q - 1)], a0 + len, static_cast<int>(q)))
        return false;

    out = std::move(limb);
    return true;
}

} // namespace detail

/// Build the labeled limb structure for p/q by constraint search over the q
/// cyclic labelings of the alpha-cycle; exactly one satisfies all invariants.
inline LimbCombinatorics limb_combinatorics(long p, long q) {
    std::vector<Angle> cycle = alpha_cycle(p, q);
    LimbCombinatorics found;
    long feasible = 0;
    for (long r = 0; r < q; ++r) {
        LimbCombinatorics candidate;
        if (detail::try_labeling(p, q, cycle, r, candidate)) {
            found = std::move(candidate);
            ++feasible;
        }
    }
    if (feasible == 0) fail("LabelingInfeasible", "no consistent labeling (bug)");
    if (feasible > 1) fail("LabelingAmbiguous", "multiple consistent labelings (bug)");
    return found;
}

} // namespace limbs
