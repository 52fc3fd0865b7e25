#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <numeric>
#include <set>

#include "limbs/limb.hpp"

using namespace limbs;

TEST_CASE("angle normalization and parsing") {
    CHECK(Angle(3, 6) == Angle(1, 2));
    CHECK(Angle(9, 7) == Angle(2, 7));
    CHECK(Angle(-1, 7) == Angle(6, 7));
    CHECK(Angle::parse("9/56").str() == "9/56");
    CHECK(Angle::parse("0").str() == "0/1");
    CHECK(Angle::parse(Angle(11, 56).str()) == Angle(11, 56));
    CHECK(!Angle::try_parse("1/").has_value());
    CHECK(!Angle::try_parse("a/b").has_value());
    CHECK(!Angle::try_parse("1/0").has_value());
}

TEST_CASE("multiply_angle") {
    CHECK(multiply_angle(Angle(1, 7), 2) == Angle(2, 7));
    CHECK(multiply_angle(Angle(4, 7), 2) == Angle(1, 7));
    CHECK(multiply_angle(Angle(1, 2), 4) == Angle(0, 1));
}

TEST_CASE("orbit_type") {
    CHECK(orbit_type(Angle(1, 7), 2) == OrbitType{0, 3});
    CHECK(orbit_type(Angle(1, 4), 2) == OrbitType{2, 1});
    // derived by direct orbit enumeration: 1/6 -> 1/3 -> 2/3 -> 1/3
    CHECK(orbit_type(Angle(1, 6), 2) == OrbitType{1, 2});
    CHECK(orbit_type(Angle(0, 1), 2) == OrbitType{0, 1});
    // l = 0 iff the denominator is coprime to the base
    for (long den : {3L, 5L, 7L, 9L, 12L, 28L}) {
        OrbitType ot = orbit_type(Angle(1, den), 2);
        CHECK((ot.preperiod == 0) == (den % 2 == 1));
    }
}

TEST_CASE("rotation_number basics") {
    CHECK(rotation_number({Angle(1, 3), Angle(2, 3)}) == RotationNumber{1, 2});
    CHECK(rotation_number({Angle(1, 7), Angle(2, 7), Angle(4, 7)}) == RotationNumber{1, 3});
    CHECK(rotation_number({Angle(3, 7), Angle(5, 7), Angle(6, 7)}) == RotationNumber{2, 3});
    CHECK_THROWS_WITH_AS(
        rotation_number({Angle(1, 7), Angle(2, 7), Angle(3, 7), Angle(4, 7)}),
        doctest::Contains("NotACycle"), Error);
    // a single cycle that is not rotational: 1/5 -> 2/5 -> 4/5 -> 3/5
    CHECK_THROWS_WITH_AS(
        rotation_number({Angle(1, 5), Angle(2, 5), Angle(3, 5), Angle(4, 5)}),
        doctest::Contains("NotRotational"), Error);
}

// Independent oracle: enumerate every period-q cycle among a/(2^q - 1) and
// keep those with the requested rotation number.
static std::vector<std::vector<Angle>> enumerate_cycles(long q) {
    long mod = (1L << q) - 1;
    std::vector<std::vector<Angle>> cycles;
    std::set<long> used;
    for (long a = 1; a < mod; ++a) {
        if (used.count(a)) continue;
        std::vector<long> orbit;
        long x = a;
        do {
            orbit.push_back(x);
            x = (2 * x) % mod;
        } while (x != a);
        for (long v : orbit) used.insert(v);
        if (static_cast<long>(orbit.size()) != q) continue;
        std::vector<Angle> cyc;
        for (long v : orbit) cyc.emplace_back(v, mod);
        std::sort(cyc.begin(), cyc.end());
        cycles.push_back(cyc);
    }
    return cycles;
}

TEST_CASE("alpha_cycle worked examples") {
    CHECK(alpha_cycle(1, 2) == std::vector<Angle>{Angle(1, 3), Angle(2, 3)});
    CHECK(alpha_cycle(1, 3) == std::vector<Angle>{Angle(1, 7), Angle(2, 7), Angle(4, 7)});
    CHECK(alpha_cycle(2, 3) == std::vector<Angle>{Angle(3, 7), Angle(5, 7), Angle(6, 7)});
}

TEST_CASE("alpha_cycle matches brute-force enumeration for q <= 12") {
    for (long q = 2; q <= 12; ++q) {
        auto cycles = enumerate_cycles(q);
        for (long p = 1; p < q; ++p) {
            if (std::gcd(p, q) != 1) continue;
            std::vector<Angle> oracle;
            int hits = 0;
            for (const auto& cyc : cycles) {
                try {
                    RotationNumber rot = rotation_number(cyc);
                    if (rot.p == p && rot.q == q) {
                        oracle = cyc;
                        ++hits;
                    }
                } catch (const Error&) {
                }
            }
            REQUIRE(hits == 1); // existence and uniqueness
            CHECK(alpha_cycle(p, q) == oracle);
            CHECK(rotation_number(alpha_cycle(p, q)) == RotationNumber{p, q});
        }
    }
}

TEST_CASE("limb_combinatorics 1/3 worked labels") {
    LimbCombinatorics limb = limb_combinatorics(1, 3);
    CHECK(limb.alpha_args == std::vector<Angle>{Angle(1, 7), Angle(2, 7), Angle(4, 7)});
    CHECK(limb.alpha_prime_args ==
          std::vector<Angle>{Angle(9, 14), Angle(11, 14), Angle(1, 14)});
    CHECK(limb.identified == Angle(4, 7));
    CHECK(limb.root_pair == std::pair<Angle, Angle>{Angle(1, 7), Angle(2, 7)});
    CHECK(limb.interval.start == Angle(4, 7));
    CHECK(limb.interval.end == Angle(1, 7));
    CHECK(limb.interval.wraps);

    REQUIRE(limb.v_arcs[0].size() == 2);
    CHECK(limb.v_arcs[0][0] == Arc::between(Angle(4, 7), Angle(9, 14)));
    CHECK(limb.v_arcs[0][1] == Arc::between(Angle(1, 14), Angle(1, 7)));
    CHECK(limb.v_arcs[1][0] == Arc::between(Angle(9, 14), Angle(11, 14)));
    CHECK(limb.v_arcs[2][0] == Arc::between(Angle(11, 14), Angle(1, 14)));
    CHECK(limb.v_arcs[2][0].wraps);
    CHECK(limb.vtilde_arcs[1][0] == Arc::between(Angle(1, 7), Angle(2, 7)));
    CHECK(limb.vtilde_arcs[2][0] == Arc::between(Angle(2, 7), Angle(4, 7)));
}

TEST_CASE("limb_combinatorics root pairs") {
    CHECK(limb_combinatorics(1, 2).root_pair ==
          std::pair<Angle, Angle>{Angle(1, 3), Angle(2, 3)});
    CHECK(limb_combinatorics(2, 5).root_pair ==
          std::pair<Angle, Angle>{Angle(9, 31), Angle(10, 31)});
    CHECK(limb_combinatorics(1, 5).root_pair ==
          std::pair<Angle, Angle>{Angle(1, 31), Angle(2, 31)});
}

TEST_CASE("limb invariants across p/q") {
    for (auto [p, q] : std::vector<std::pair<long, long>>{
             {1, 2}, {1, 3}, {2, 3}, {1, 4}, {3, 4}, {1, 5}, {2, 5}, {3, 5}, {4, 5}, {3, 7},
             {2, 9}, {5, 11}}) {
        CAPTURE(p);
        CAPTURE(q);
        LimbCombinatorics limb = limb_combinatorics(p, q);

        // orbit types of the labeled rays
        for (const Angle& a : limb.alpha_args) CHECK(orbit_type(a, 2) == OrbitType{0, q});
        for (const Angle& a : limb.alpha_prime_args)
            CHECK(orbit_type(a, 2) == OrbitType{1, q});

        // theta^i = theta~^i + 1/2, all 2q distinct
        std::set<Angle> all;
        for (long i = 0; i < q; ++i) {
            CHECK(limb.alpha_prime_args[i] == limb.alpha_args[i].antipode());
            all.insert(limb.alpha_args[i]);
            all.insert(limb.alpha_prime_args[i]);
        }
        CHECK(all.size() == static_cast<std::size_t>(2 * q));

        // doubling advances labels by p
        for (long i = 0; i < q; ++i)
            CHECK(multiply_angle(limb.alpha_args[i], 2) == limb.alpha_args[(i + p) % q]);

        // the wake interval maps affinely onto I under m_2^{q-1}
        Rational stretch = (limb.root_pair.second.value() - limb.root_pair.first.value()) *
                           pow2(static_cast<unsigned long>(q - 1));
        CHECK(stretch == limb.lift_length());
        // dense rational sample: monotone and inside I
        const int n = 64;
        Rational prev_lift;
        for (int k = 1; k < n; ++k) {
            Rational t = limb.root_pair.first.value() +
                         (limb.root_pair.second.value() - limb.root_pair.first.value()) *
                             make_rational(k, n);
            Angle img = double_angle_iter(Angle(t), static_cast<unsigned long>(q - 1));
            REQUIRE(limb.in_interval(img));
            Rational lift = limb.lift(img);
            if (k > 1) CHECK(prev_lift < lift);
            prev_lift = lift;
        }

        // region arcs tile the circle minus the 2q ray angles: sorted by
        // start, consecutive arcs abut exactly and the lengths sum to 1
        std::vector<Arc> all_arcs;
        for (const auto& arcs : limb.v_arcs)
            for (const Arc& a : arcs) all_arcs.push_back(a);
        for (std::size_t i = 1; i < limb.vtilde_arcs.size(); ++i)
            for (const Arc& a : limb.vtilde_arcs[i]) all_arcs.push_back(a);
        CHECK(all_arcs.size() == static_cast<std::size_t>(2 * q));
        std::sort(all_arcs.begin(), all_arcs.end(),
                  [](const Arc& a, const Arc& b) { return a.start < b.start; });
        Rational total = 0;
        for (std::size_t i = 0; i < all_arcs.size(); ++i) {
            total += all_arcs[i].length();
            CHECK(all_arcs[i].end == all_arcs[(i + 1) % all_arcs.size()].start);
        }
        CHECK(total == 1);
    }
}

TEST_CASE("arc containment convention") {
    Arc a = Arc::between(Angle(11, 14), Angle(1, 14));
    CHECK(a.wraps);
    CHECK(a.contains(Angle(11, 14))); // half-open: start included
    CHECK(a.contains(Angle(13, 14)));
    CHECK(a.contains(Angle(0, 1)));
    CHECK(!a.contains(Angle(1, 14))); // end excluded
    CHECK(!a.contains(Angle(1, 2)));
    CHECK(a.length() == make_rational(2, 7)); // 3/14 up to the wrap plus 1/14
}

TEST_CASE("limb rejects bad input") {
    CHECK_THROWS_AS(limb_combinatorics(2, 4), Error);
    CHECK_THROWS_AS(limb_combinatorics(0, 3), Error);
    CHECK_THROWS_AS(limb_combinatorics(3, 3), Error);
}
