#pragma once

#include <chrono>
#include <string>
#include <vector>

#include "limbs/prng.hpp"
#include "limbs/render.hpp"
#include "limbs/serialize.hpp"

namespace limbs {

struct VerificationCase {
    std::string id;
    Json inputs;
    Json expected;
    Json observed;
    double error_metric = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

struct VerificationReport {
    std::string suite;
    std::vector<VerificationCase> cases;
    int passed = 0;
    int failed = 0;
    double runtime_seconds = 0.0;

    bool all_passed() const { return failed == 0; }

    Json json() const {
        Json j;
        j["schema"] = "limbs/report/1";
        j["suite"] = suite;
        Json arr = Json::array();
        for (const auto& c : cases)
            arr.push_back(Json{{"id", c.id},
                               {"inputs", c.inputs},
                               {"expected", c.expected},
                               {"observed", c.observed},
                               {"error_metric", c.error_metric},
                               {"tolerance", c.tolerance},
                               {"pass", c.pass}});
        j["cases"] = arr;
        j["summary"] = Json{{"passed", passed},
                            {"failed", failed},
                            {"runtime_seconds", runtime_seconds}};
        return j;
    }
};

struct SuiteParams {
    long p = 1;
    long p2 = 2;
    long q = 3;
    std::uint64_t seed = 1;
    int sample_count = 100;
    double g_min = 1e-14;
};

namespace detail {

inline void add_case(VerificationReport& rep, std::string id, Json inputs, Json expected,
                     Json observed, double err, double tol) {
    VerificationCase c;
    c.id = std::move(id);
    c.inputs = std::move(inputs);
    c.expected = std::move(expected);
    c.observed = std::move(observed);
    c.error_metric = err;
    c.tolerance = tol;
    c.pass = err <= tol;
    rep.cases.push_back(std::move(c));
    if (rep.cases.back().pass) ++rep.passed;
    else ++rep.failed;
}

inline void add_exact(VerificationReport& rep, std::string id, Json inputs, Json expected,
                      Json observed, bool ok) {
    add_case(rep, std::move(id), std::move(inputs), std::move(expected), std::move(observed),
             ok ? 0.0 : 1.0, 0.0);
}

inline void add_error_case(VerificationReport& rep, std::string id, Json inputs,
                           const std::string& what) {
    add_case(rep, std::move(id), std::move(inputs), "ok", Json{{"error", what}}, 1.0, 0.0);
}

/// Random even-denominator angle strictly inside the wake interval, shallow
/// enough that the Misiurewicz Newton basins stay well separated, and with
/// a strictly preperiodic transported angle (dyadic angles transport to
/// m_{q+1}-periodic images because their orbit hits the identified fixed
/// point).
inline Angle random_wake_misiurewicz_angle(SplitMix64& rng, const LimbCombinatorics& limb) {
    for (int tries = 0; tries < 400; ++tries) {
        int bits = 5 + static_cast<int>(rng.below(7));
        Angle a = random_angle_between(rng, limb.root_pair.first, limb.root_pair.second, bits);
        OrbitType ot = orbit_type(a, 2);
        if (ot.preperiod < 1 || ot.preperiod + ot.period > 18) continue;
        Angle inner = double_angle_iter(a, static_cast<unsigned long>(limb.q - 1));
        if (first_return_orbit_type(limb, inner).preperiod < 1) continue;
        return a;
    }
    fail("NoConvergence", "could not sample a Misiurewicz angle (bug)");
}

/// Random angle strictly inside the (wrapping) interval I_{p/q}.
inline Angle random_interval_angle(SplitMix64& rng, const LimbCombinatorics& limb) {
    BigInt k = 1 + BigInt(static_cast<unsigned long>(rng.below((1ull << 30) - 2)));
    Rational u = make_rational(k, pow_int(2, 30));
    return Angle(limb.lift_base() + limb.lift_length() * u);
}

} // namespace detail

/// Exact conjugacy identities on random rationals in I_{p/q}.
inline VerificationReport suite_conjugacy(const SuiteParams& params) {
    VerificationReport rep;
    rep.suite = "conjugacy";
    LimbCombinatorics limb = limb_combinatorics(params.p, params.q);
    SplitMix64 rng(params.seed);

    int ok_conj = 0, ok_round = 0, n = params.sample_count;
    std::vector<Angle> sample;
    for (int i = 0; i < n; ++i) {
        Angle t = detail::random_interval_angle(rng, limb);
        if (!limb.in_interval(t)) continue;
        sample.push_back(t);
        Angle lhs = theta_hat(limb, first_return_eval(limb, t));
        Angle rhs = multiply_angle(theta_hat(limb, t),
                                   static_cast<unsigned long>(limb.q + 1));
        if (lhs == rhs) ++ok_conj;
        Angle back = theta_hat_inv(limb, theta_hat(limb, t).value());
        if (limb.t_equal(back, t)) ++ok_round;
    }
    int total = static_cast<int>(sample.size());
    detail::add_exact(rep, "theta_hat conjugates m2^(1) to m_{q+1} (exact)",
                      Json{{"p", params.p}, {"q", params.q}, {"samples", total}},
                      total, ok_conj, ok_conj == total);
    detail::add_exact(rep, "theta_hat_inv round trip (exact)",
                      Json{{"p", params.p}, {"q", params.q}, {"samples", total}},
                      total, ok_round, ok_round == total);

    // Monotonicity: theta_hat is increasing along the lift.
    std::sort(sample.begin(), sample.end(), [&](const Angle& a, const Angle& b) {
        return limb.lift(a) < limb.lift(b);
    });
    bool monotone = true;
    for (std::size_t i = 0; i + 1 < sample.size(); ++i) {
        if (limb.lift(sample[i]) == limb.lift(sample[i + 1])) continue;
        if (!(theta_hat(limb, sample[i]) < theta_hat(limb, sample[i + 1]))) monotone = false;
    }
    detail::add_exact(rep, "theta_hat monotone on sorted sample",
                      Json{{"samples", total}}, true, monotone, monotone);

    // Boundary consistency: both one-sided itineraries at each shared branch
    // endpoint give the same value.
    bool boundary_ok = true;
    for (const Angle& tp : limb.alpha_prime_args) {
        Angle via_left = theta_hat(limb, tp); // left-closed branch
        // Right-branch itinerary: the endpoint as terminating digits.
        std::size_t b = detail::branch_index(limb, limb.lift(tp));
        Rational alt = make_rational(static_cast<long>(b), 1) /
                       Rational(BigInt(limb.q + 1)); // digit b-1 then all-q tail = digit b
        if (via_left.value() != alt) boundary_ok = false;
    }
    detail::add_exact(rep, "branch endpoints map to (q+1)-adic grid points", Json{},
                      true, boundary_ok, boundary_ok);
    return rep;
}

/// Involution identities plus the numeric fixed-arc spot check.
inline VerificationReport suite_involution(const SuiteParams& params) {
    VerificationReport rep;
    rep.suite = "involution";
    LimbCombinatorics limb = limb_combinatorics(params.p, params.q);
    SplitMix64 rng(params.seed);

    int ok = 0, n = params.sample_count;
    for (int i = 0; i < n; ++i) {
        Angle t = random_angle_between(rng, limb.root_pair.first, limb.root_pair.second);
        if (theta_bar(limb, theta_bar(limb, t)) == t) ++ok;
    }
    detail::add_exact(rep, "theta_bar is an exact involution",
                      Json{{"p", params.p}, {"q", params.q}, {"samples", n}}, n, ok, ok == n);

    bool swap_ok = theta_bar(limb, limb.root_pair.first) == limb.root_pair.second &&
                   theta_bar(limb, limb.root_pair.second) == limb.root_pair.first;
    detail::add_exact(rep, "theta_bar swaps the wake endpoints", Json{}, true, swap_ok,
                      swap_ok);

    Angle ts = symmetry_angle(limb);
    bool fixed_ok = theta_bar(limb, ts) == ts;
    detail::add_exact(rep, "symmetry angle is fixed (and rational by construction)",
                      Json{{"p", params.p}, {"q", params.q}}, "fixed", ts.str(), fixed_ok);
    if (params.p == 1 && params.q == 3) {
        detail::add_exact(rep, "symmetry angle of the 1/3-limb", Json{}, "11/56", ts.str(),
                          ts == Angle(11, 56));
        Angle quarter_bar = theta_bar(limb, Angle(1, 4));
        detail::add_exact(rep, "theta_bar(1/4) in the 1/3-limb", Json{}, "1/6",
                          quarter_bar.str(), quarter_bar == Angle(1, 6));
    }

    // Numeric fixed arc: the symmetry-angle parameter is involution-fixed
    // and its locus image (relative argument 1/2) is real.
    try {
        auto direct =
            misiurewicz_from_ray(ParameterSpace::mandelbrot(), ts, params.g_min, 1e-2);
        auto through = involution_misiurewicz(limb, ts, params.g_min, 1e-2);
        double err = std::abs(direct.parameter - through.parameter);
        detail::add_case(rep, "symmetry-angle parameter is involution-fixed",
                         Json{{"theta_s", ts.str()}}, to_json(direct.parameter),
                         to_json(through.parameter), err, 1e-6);
        // Locus image of the arc: relative argument 1/2. For odd q this is
        // strictly preperiodic under m_{q+1}; for even q it is fixed and
        // lands where the critical value itself is the fixed point.
        ParameterSpace loc = ParameterSpace::locus(static_cast<int>(params.q));
        OrbitType oh = orbit_type(Angle(1, 2), static_cast<unsigned long>(params.q + 1));
        Complex lam_img;
        if (oh.preperiod >= 1) {
            lam_img = misiurewicz_from_ray(loc, Angle(1, 2), params.g_min, 1e-2).parameter;
        } else {
            auto ray = trace_param_ray(loc, Angle(1, 2), params.g_min);
            lam_img = solve_special(
                loc, SpecialTarget::misiurewicz(0, static_cast<int>(oh.period)),
                ray.landing_estimate);
        }
        detail::add_case(rep, "locus image of the symmetry arc is real",
                         Json{{"relative_argument", "1/2"}}, 0.0, to_json(lam_img),
                         std::fabs(lam_img.imag()), 1e-6);
    } catch (const Error& e) {
        detail::add_error_case(rep, "numeric fixed-arc spot check", Json{}, e.what());
    }
    return rep;
}

/// Theorem C shadow: transported Misiurewicz data across two limbs and the
/// 0-limb, checked per angle.
inline VerificationReport suite_theorem_c(const SuiteParams& params) {
    VerificationReport rep;
    rep.suite = "theoremC";
    LimbCombinatorics limb_a = limb_combinatorics(params.p, params.q);
    LimbCombinatorics limb_b = limb_combinatorics(params.p2, params.q);
    SplitMix64 rng(params.seed);
    ParameterSpace mand = ParameterSpace::mandelbrot();
    ParameterSpace loc = ParameterSpace::locus(static_cast<int>(params.q));

    for (int i = 0; i < params.sample_count; ++i) {
        Angle theta = detail::random_wake_misiurewicz_angle(rng, limb_a);
        Json inputs{{"theta", theta.str()}};
        Rational u = theta_limb(limb_a, theta);
        Angle theta2 = theta_limb_inv(limb_b, u);

        bool exact_ok = theta_limb(limb_b, theta2) == u;
        // Parity preservation and first-return transport (both exact).
        OrbitType ot_theta = orbit_type(theta, 2);
        OrbitType ot_theta2 = orbit_type(theta2, 2);
        exact_ok = exact_ok && (ot_theta.preperiod >= 1) == (ot_theta2.preperiod >= 1);
        Angle inner = double_angle_iter(theta, static_cast<unsigned long>(params.q - 1));
        OrbitType fr = first_return_orbit_type(limb_a, inner);
        OrbitType mu = orbit_type(Angle(u), static_cast<unsigned long>(params.q + 1));
        exact_ok = exact_ok && fr == mu;
        detail::add_exact(rep, "angle transport exact #" + std::to_string(i), inputs,
                          true, exact_ok, exact_ok);

        try {
            // alpha-type landings (q rays at a weakly repelling point)
            // approach as G^{log|rho|/(q log 2)}, so the landing-vs-polish
            // match for random samples uses a loose bound; the acceptance
            // criteria pin 1e-5 on their own anchor angles.
            auto rec_a = misiurewicz_from_ray(mand, theta, params.g_min, 1e-2);
            auto rec_l = misiurewicz_from_ray(loc, Angle(u), params.g_min, 1e-2);
            auto rec_b = misiurewicz_from_ray(mand, theta2, params.g_min, 1e-2);
            Json observed{{"c", to_json(rec_a.parameter)},
                          {"lambda", to_json(rec_l.parameter)},
                          {"c_image", to_json(rec_b.parameter)},
                          {"types",
                           Json::array({to_json(OrbitType{rec_a.preperiod, rec_a.period}),
                                        to_json(OrbitType{rec_l.preperiod, rec_l.period}),
                                        to_json(OrbitType{rec_b.preperiod, rec_b.period})})}};
            detail::add_exact(rep, "landings polished #" + std::to_string(i), inputs,
                              "landed+polished", observed, true);
        } catch (const Error& e) {
            detail::add_error_case(rep, "landings polished #" + std::to_string(i), inputs,
                                   e.what());
        }
    }
    return rep;
}

/// Theorem D shadow: the involution exchanges landing parameters and the
/// locus images are complex conjugate.
inline VerificationReport suite_theorem_d(const SuiteParams& params) {
    VerificationReport rep;
    rep.suite = "theoremD";
    LimbCombinatorics limb = limb_combinatorics(params.p, params.q);
    SplitMix64 rng(params.seed);
    ParameterSpace loc = ParameterSpace::locus(static_cast<int>(params.q));

    for (int i = 0; i < params.sample_count; ++i) {
        Angle theta = detail::random_wake_misiurewicz_angle(rng, limb);
        Angle theta_img = theta_bar(limb, theta);
        Json inputs{{"theta", theta.str()}, {"theta_bar", theta_img.str()}};

        bool invol_ok = theta_bar(limb, theta_img) == theta;
        Rational u = theta_limb(limb, theta);
        bool sum_ok = theta_limb(limb, theta_img) + u == 1;
        detail::add_exact(rep, "theta_bar algebra #" + std::to_string(i), inputs, true,
                          invol_ok && sum_ok, invol_ok && sum_ok);

        try {
            Complex lam_u = misiurewicz_from_ray(loc, Angle(u), params.g_min, 1e-2).parameter;
            Complex lam_v =
                misiurewicz_from_ray(loc, Angle(Rational(1) - u), params.g_min, 1e-2).parameter;
            double err = std::abs(lam_v - std::conj(lam_u));
            detail::add_case(rep, "locus images conjugate #" + std::to_string(i), inputs,
                             to_json(std::conj(lam_u)), to_json(lam_v), err, 1e-6);
        } catch (const Error& e) {
            detail::add_error_case(rep, "locus images conjugate #" + std::to_string(i),
                                   inputs, e.what());
        }
    }
    return rep;
}

/// Structural facts about L_q near the unit disk and the 0-limb.
inline VerificationReport suite_locus_structure(const SuiteParams& params) {
    VerificationReport rep;
    rep.suite = "locus_structure";
    const int q = static_cast<int>(params.q);
    ParameterSpace loc = ParameterSpace::locus(q);

    Membership inside = membership(loc, {0.5, 0.0}, 4096);
    detail::add_exact(rep, "punctured unit disk is inside L_q", Json{{"lambda", "0.5"}},
                      true, inside.inside, inside.inside);

    for (auto [r, s] : std::vector<std::pair<int, int>>{{1, 2}, {1, 3}}) {
        Complex lam = 1.06 * std::polar(1.0, 2.0 * std::numbers::pi * r / s);
        auto cls = classify_critical_orbit(DynamicalSystem::family(q, lam), 8192, 1e-9);
        bool ok = cls.kind == CriticalOrbitClass::Kind::attracted && cls.period == s;
        detail::add_exact(rep,
                          "period " + std::to_string(s) + "-tupling just outside e^{2pi i " +
                              std::to_string(r) + "/" + std::to_string(s) + "}",
                          Json{{"lambda", to_json(lam)}}, s,
                          to_json(cls), ok);
    }

    {
        double lam_star = double(q + 1) * std::pow(1.0 + 1.0 / q, q);
        DynamicalSystem sys = DynamicalSystem::family(q, {lam_star, 0.0});
        double err = std::abs(sys.critical_value() + Complex(double(q), 0.0));
        detail::add_case(rep, "main branch point: P(omega) = -q",
                         Json{{"lambda", lam_star}}, -q, to_json(sys.critical_value()), err,
                         1e-12);
    }
    {
        double lam_c = std::pow(1.0 + 1.0 / q, q);
        DynamicalSystem sys = DynamicalSystem::family(q, {lam_c, 0.0});
        Complex w = sys.free_critical_point();
        double fixed_err = std::abs(sys.apply(w) - w);
        double mult = std::abs(sys.derivative(w));
        detail::add_case(rep, "main 0-limb center: omega superattracting fixed",
                         Json{{"lambda", lam_c}}, 0.0,
                         Json{{"fixed_error", fixed_err}, {"multiplier", mult}},
                         std::max(fixed_err, mult * 1e-2), 1e-12);
    }

    // The paper's root landing (rays at relative 0/1 land at lambda = 1),
    // demonstrated by dyadic angles 2^-k marching toward the boundary:
    // landings approach lambda = 1 as the angle approaches 0.
    try {
        double prev = 1e9;
        bool monotone = true;
        Json dists = Json::array();
        for (int k : {4, 10, 16, 22}) {
            Angle th(make_rational(1, 1) / Rational(pow_int(2, static_cast<unsigned long>(k))));
            auto ray = trace_param_ray(loc, th, 1e-10);
            double d = std::abs(ray.landing_estimate - Complex(1.0, 0.0));
            dists.push_back(Json{{"angle", th.str()}, {"distance", d}});
            if (d >= prev) monotone = false;
            prev = d;
        }
        detail::add_exact(rep, "landings approach the 0-limb root as theta -> 0", Json{},
                          true, dists, monotone);
    } catch (const Error& e) {
        detail::add_error_case(rep, "landings approach the 0-limb root as theta -> 0", Json{},
                               e.what());
    }
    return rep;
}

/// Conjugation symmetry of membership on a pixel grid.
inline VerificationReport suite_symmetry(const SuiteParams& params) {
    VerificationReport rep;
    rep.suite = "symmetry";
    const int q = static_cast<int>(params.q);
    ParameterSpace loc = ParameterSpace::locus(q);
    const int n = 64;
    int mismatches = 0;
    for (int yi = 0; yi < n / 2; ++yi)
        for (int xi = 0; xi < n; ++xi) {
            double re = detail::pixel_coord(-3.0, 13.0, n, xi);
            double im = detail::pixel_coord(-4.7, 4.7, n, yi);
            bool a = membership(loc, {re, im}, 512).inside;
            bool b = membership(loc, {re, -im}, 512).inside;
            if (a != b) ++mismatches;
        }
    detail::add_exact(rep, "membership(conj lambda) == membership(lambda) on a grid",
                      Json{{"q", q}, {"grid", n}}, 0, mismatches, mismatches == 0);
    return rep;
}

inline VerificationReport run_suite(const std::string& name, const SuiteParams& params) {
    auto start = std::chrono::steady_clock::now();
    VerificationReport rep;
    if (name == "conjugacy") rep = suite_conjugacy(params);
    else if (name == "involution") rep = suite_involution(params);
    else if (name == "theoremC") rep = suite_theorem_c(params);
    else if (name == "theoremD") rep = suite_theorem_d(params);
    else if (name == "locus_structure") rep = suite_locus_structure(params);
    else if (name == "symmetry") rep = suite_symmetry(params);
    else fail("BadArgument", "unknown suite '" + name + "'");
    rep.runtime_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return rep;
}

} // namespace limbs
