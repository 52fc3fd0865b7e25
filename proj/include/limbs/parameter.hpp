#pragma once

#include <array>
#include <optional>

#include "limbs/dynamics.hpp"
#include "limbs/theta.hpp"

namespace limbs {

/// Parameter space selector: the Mandelbrot plane, the connectedness locus
/// of the degree-(q+1) family in lambda, or its monic model in nu with
/// lambda = nu^q on the univalence wedge |Arg nu| < pi/q.
struct ParameterSpace {
    enum class Kind { mandelbrot, locus, monic_locus };
    Kind kind = Kind::mandelbrot;
    int q = 0;

    static ParameterSpace mandelbrot() { return {Kind::mandelbrot, 0}; }
    static ParameterSpace locus(int q) {
        check(q >= 2, "BadLimb", "locus needs q >= 2");
        return {Kind::locus, q};
    }
    static ParameterSpace monic_locus(int q) {
        check(q >= 2, "BadLimb", "monic locus needs q >= 2");
        return {Kind::monic_locus, q};
    }

    DynamicalSystem system_at(Complex point) const {
        switch (kind) {
            case Kind::mandelbrot: return DynamicalSystem::quadratic(point);
            case Kind::locus: return DynamicalSystem::family(q, point);
            case Kind::monic_locus: return DynamicalSystem::monic(q, point);
        }
        return DynamicalSystem::quadratic(point);
    }

    const char* name() const {
        switch (kind) {
            case Kind::mandelbrot: return "mandelbrot";
            case Kind::locus: return "locus";
            case Kind::monic_locus: return "monic_locus";
        }
        return "?";
    }
};

struct Membership {
    bool inside = false;
    int iterations = 0; // escape iterate when outside, max_iter when inside
};

/// Escape-time verdict on the free critical orbit.
inline Membership membership(const ParameterSpace& space, Complex point, int max_iter) {
    DynamicalSystem sys = space.system_at(point);
    const double radius = sys.escape_radius();
    Complex z = sys.free_critical_point();
    for (int n = 0; n < max_iter; ++n) {
        if (std::abs(z) > radius) return {false, n};
        z = sys.apply(z);
    }
    return {true, max_iter};
}

struct ParamCoordinates {
    double potential = 0.0;
    double argument = 0.0; // external argument; relative to the 0-limb for the loci
};

/// Parameter external coordinates of an escaping parameter: for M the
/// Boettcher data of the critical value; for the loci the dynamical data of
/// the free critical value, whose argument equals the parameter argument
/// relative to the 0-limb.
inline ParamCoordinates param_coordinates(const ParameterSpace& space, Complex point,
                                          int max_iter = 4096) {
    DynamicalSystem sys = space.system_at(point).model();
    EscapeResult esc = escape_analyze(sys, sys.critical_value(), max_iter);
    check(esc.escaped, "NotEscaping", "parameter is not outside the locus");
    return {esc.potential, esc.ext_argument};
}

namespace detail {

inline Complex dparam_critical_value(const DynamicalSystem& sys) {
    switch (sys.kind) {
        case DynamicalSystem::Kind::quadratic: return {1.0, 0.0};
        case DynamicalSystem::Kind::family: {
            // v = P(omega) = -lambda (q/(q+1))^{q+1} for every q: the
            // factor omega = -q/(q+1) carries the sign.
            double s = std::pow(double(sys.q) / double(sys.q + 1), sys.q + 1);
            return {-s, 0.0};
        }
        case DynamicalSystem::Kind::monic: {
            // v = -(q^q/(q+1)^{q+1}) nu^{q+1}
            double s = std::pow(double(sys.q), sys.q) / std::pow(double(sys.q + 1), sys.q + 1);
            return -double(sys.q + 1) * s * cpow_int(sys.param, sys.q);
        }
    }
    return {0.0, 0.0};
}

inline Complex dparam_apply(const DynamicalSystem& sys, Complex z) {
    switch (sys.kind) {
        case DynamicalSystem::Kind::quadratic: return {1.0, 0.0};
        case DynamicalSystem::Kind::family:
            return z * cpow_int(1.0 + z / double(sys.q), sys.q);
        case DynamicalSystem::Kind::monic:
            return double(sys.q) * z * cpow_int(z + sys.param, sys.q - 1);
    }
    return {0.0, 0.0};
}

inline Complex dparam_dz_apply(const DynamicalSystem& sys, Complex z) {
    switch (sys.kind) {
        case DynamicalSystem::Kind::quadratic: return {0.0, 0.0};
        case DynamicalSystem::Kind::family: return sys.derivative(z) / sys.param;
        case DynamicalSystem::Kind::monic:
            return double(sys.q) * cpow_int(z + sys.param, sys.q - 2) *
                   (double(sys.q) * z + sys.param);
    }
    return {0.0, 0.0};
}

inline bool finite(Complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

} // namespace detail

/// Trace the parameter external ray of (relative) argument theta down to
/// potential G_min. Mandelbrot rays run in the c-plane; locus rays run in
/// the monic nu-plane inside the univalence wedge and report lambda = nu^q.
inline RayTrace trace_param_ray(const ParameterSpace& space, const Angle& theta, double g_min,
                                double g_start = 26.0, int steps_per_halving = 12) {
    check(g_start > g_min && g_min > 0, "BadArgument", "need G_start > G_min > 0");
    const bool mandel = space.kind == ParameterSpace::Kind::mandelbrot;
    const bool report_lambda = space.kind == ParameterSpace::Kind::locus;
    const int q = mandel ? 0 : space.q;
    const int d = mandel ? 2 : q + 1;
    g_start = std::min(g_start, 600.0 / d);

    auto system_of = [&](Complex par) {
        return mandel ? DynamicalSystem::quadratic(par) : DynamicalSystem::monic(q, par);
    };
    auto record = [&](Complex par) { return report_lambda ? cpow_int(par, q) : par; };

    // Newton on F(par) = f_par^n(v(par)) - T(par) with the analytic
    // parameter derivative by forward recurrence.
    auto newton = [&](int n, double top_g, double top_t, Complex& par) {
        for (int it = 0; it < 64; ++it) {
            DynamicalSystem sys = system_of(par);
            Complex z = sys.critical_value();
            Complex dz = detail::dparam_critical_value(sys);
            for (int j = 0; j < n; ++j) {
                Complex nz = sys.apply(z);
                dz = sys.derivative(z) * dz + detail::dparam_apply(sys, z);
                z = nz;
            }
            Complex w = std::polar(std::exp(top_g), 2.0 * std::numbers::pi * top_t);
            Complex target, dtarget;
            if (mandel) {
                target = w - par / (2.0 * w);
                dtarget = -1.0 / (2.0 * w);
            } else {
                target = w - double(q) / double(q + 1) * par;
                dtarget = Complex(-double(q) / double(q + 1), 0.0);
            }
            Complex err = z - target;
            Complex deriv = dz - dtarget;
            if (!detail::finite(err) || deriv == Complex{0.0, 0.0}) return false;
            Complex step = err / deriv;
            if (!detail::finite(step)) return false;
            double scale = std::max(1.0, std::abs(par));
            if (std::abs(step) > 0.25 * scale) return false;
            par -= step;
            if (!mandel)
                check(std::abs(std::arg(par)) < std::numbers::pi / q, "WedgeExit",
                      "locus ray left the univalence wedge |Arg nu| < pi/q");
            if (std::abs(step) <= 1e-13 * scale) return true;
        }
        return false;
    };

    auto top_of = [&](double g) {
        int n = 0;
        double gt = g;
        Angle a = theta;
        while (gt < g_start - 1e-14) {
            gt *= d;
            a = multiply_angle(a, static_cast<unsigned long>(d));
            ++n;
        }
        return std::tuple<int, double, double>(n, gt, a.turns());
    };

    RayTrace trace;
    trace.target_argument = theta;

    Complex par;
    if (mandel) {
        Complex w = std::polar(std::exp(g_start), 2.0 * std::numbers::pi * theta.turns());
        par = w - 0.5;
    } else {
        // Capacity asymptotics of the monic locus plus the affine relative
        // reparametrization A_q.
        double kcap = std::pow(double(q), double(q) / double(q + 1)) / double(q + 1);
        double arg_l = (theta.turns() - 0.5) / double(q + 1);
        par = std::polar(std::exp(g_start / double(q + 1)) / kcap,
                         2.0 * std::numbers::pi * arg_l);
    }
    {
        auto [n0, tg, tt] = top_of(g_start);
        check(newton(n0, tg, tt, par), "NoConvergence", "parameter ray start did not converge");
    }
    trace.samples.push_back({g_start, record(par)});

    const double shrink = std::pow(0.5, 1.0 / steps_per_halving);
    double g_prev = g_start;
    double g_next = g_start * shrink;
    int halvings = 0;
    while (true) {
        if (trace.samples.size() > 60000) {
            trace.status = RayTrace::Status::max_steps;
            break;
        }
        auto [n, tg, tt] = top_of(g_next);
        Complex try_par = par;
        if (newton(n, tg, tt, try_par)) {
            par = try_par;
            trace.samples.push_back({g_next, record(par)});
            halvings = 0;
            if (g_next <= g_min) {
                const auto& s = trace.samples;
                double move = std::abs(s[s.size() - 1].point - s[s.size() - 2].point);
                trace.status = move < 1e-6 ? RayTrace::Status::landed : RayTrace::Status::max_steps;
                break;
            }
            g_prev = g_next;
            g_next = std::max(g_min, g_next * shrink);
        } else {
            if (++halvings > 24) {
                // Double-precision wall near a repelling landing point: the
                // trace has converged even though g_min was not reachable.
                const auto& s = trace.samples;
                double move = s.size() >= 2
                                  ? std::abs(s[s.size() - 1].point - s[s.size() - 2].point)
                                  : 1.0;
                trace.status =
                    move < 1e-6 ? RayTrace::Status::landed : RayTrace::Status::diverged;
                break;
            }
            g_next = std::sqrt(g_prev * g_next);
        }
    }
    trace.landing_estimate = trace.samples.back().point;
    return trace;
}

// --- Newton solvers -----------------------------------------------------

struct SpecialTarget {
    enum class Kind { center, root, misiurewicz };
    Kind kind = Kind::center;
    int period = 1;    // k
    int preperiod = 0; // l, misiurewicz only (counted from the critical value)

    static SpecialTarget center(int k) { return {Kind::center, k, 0}; }
    static SpecialTarget root(int k) { return {Kind::root, k, 0}; }
    static SpecialTarget misiurewicz(int l, int k) { return {Kind::misiurewicz, k, l}; }
};

struct ComponentRecord {
    ParameterSpace space;
    int period = 1;
    Complex center{0.0, 0.0};
    Complex root{0.0, 0.0};
    std::optional<std::pair<Angle, Angle>> root_angles;
};

struct MisiurewiczRecord {
    ParameterSpace space;
    int preperiod = 0;
    int period = 1;
    Complex parameter{0.0, 0.0};
    std::vector<Angle> angles;
};

namespace detail {

/// Newton on one complex parameter equation F(par) = f^{l+k}(v) - f^l(v)
/// (misiurewicz) or F(par) = f^k(crit) - crit (center).
inline Complex param_newton(const ParameterSpace& space, bool from_value, int skip, int total,
                            Complex seed) {
    Complex par = seed;
    for (int it = 0; it < 200; ++it) {
        DynamicalSystem sys = space.system_at(par);
        Complex z, dz;
        if (from_value) {
            z = sys.critical_value();
            dz = dparam_critical_value(sys);
        } else {
            z = sys.free_critical_point();
            dz = {0.0, 0.0}; // the free critical point of the loci is parameter-free
            if (sys.kind == DynamicalSystem::Kind::monic)
                dz = Complex(-1.0 / double(sys.q + 1), 0.0);
        }
        Complex mark_z{0.0, 0.0}, mark_dz{0.0, 0.0};
        for (int j = 0; j < total; ++j) {
            if (j == skip) {
                mark_z = z;
                mark_dz = dz;
            }
            Complex nz = sys.apply(z);
            dz = sys.derivative(z) * dz + dparam_apply(sys, z);
            z = nz;
        }
        Complex err = z - mark_z;
        Complex deriv = dz - mark_dz;
        if (!finite(err) || deriv == Complex{0.0, 0.0}) fail("NoConvergence", "singular Newton");
        Complex step = err / deriv;
        if (!finite(step)) fail("NoConvergence", "Newton step not finite");
        double scale = std::max(1.0, std::abs(par));
        // Damp wild steps rather than giving up outright.
        if (std::abs(step) > 0.5 * scale) step *= 0.5 * scale / std::abs(step);
        par -= step;
        if (std::abs(step) <= 1e-14 * scale) return par;
    }
    fail("NoConvergence", "parameter Newton did not converge");
}

struct TwoVarState {
    Complex par;
    Complex z;
};

/// A point near the period-k cycle at the given parameter: the bounded
/// prefix of the critical orbit (the parameter may sit just outside the
/// locus, e.g. a ray landing), polished at fixed parameter when possible.
inline Complex cycle_seed(const ParameterSpace& space, int k, Complex par);

/// Damped Newton on {f^k(z) - z = 0, (f^k)'(z) - t = 0} in (par, z).
inline TwoVarState cycle_system_newton(const ParameterSpace& space, int k, Complex t,
                                       TwoVarState state) {
    auto residual = [&](const TwoVarState& s, std::array<Complex, 2>& r,
                        std::array<Complex, 4>& jac) {
        DynamicalSystem sys = space.system_at(s.par);
        Complex z = s.z;
        Complex az{1.0, 0.0};  // dz_j/dz0
        Complex bz{0.0, 0.0};  // dz_j/dpar
        Complex cz{0.0, 0.0};  // d(az)/dz0
        Complex dz{0.0, 0.0};  // d(az)/dpar
        for (int j = 0; j < k; ++j) {
            Complex fz = sys.derivative(z);
            Complex fzz = sys.second_derivative(z);
            Complex fpar = dparam_apply(sys, z);
            Complex fzpar = dparam_dz_apply(sys, z);
            Complex n_cz = fzz * az * az + fz * cz;
            Complex n_dz = (fzz * bz + fzpar) * az + fz * dz;
            Complex n_az = fz * az;
            Complex n_bz = fz * bz + fpar;
            z = sys.apply(z);
            az = n_az;
            bz = n_bz;
            cz = n_cz;
            dz = n_dz;
        }
        r = {z - s.z, az - t};
        jac = {bz, az - 1.0, dz, cz}; // rows: d/dpar, d/dz0
    };

    std::array<Complex, 2> r;
    std::array<Complex, 4> jac;
    for (int it = 0; it < 200; ++it) {
        residual(state, r, jac);
        double rnorm = std::abs(r[0]) + std::abs(r[1]);
        if (!std::isfinite(rnorm)) fail("NoConvergence", "cycle system blew up");
        Complex det = jac[0] * jac[3] - jac[1] * jac[2];
        if (det == Complex{0.0, 0.0}) fail("NoConvergence", "singular cycle system");
        Complex dpar = (r[0] * jac[3] - r[1] * jac[1]) / det;
        Complex dz0 = (r[1] * jac[0] - r[0] * jac[2]) / det;
        if (!finite(dpar) || !finite(dz0)) fail("NoConvergence", "cycle step not finite");

        double tau = 1.0;
        TwoVarState next = state;
        for (int h = 0; h < 25; ++h) {
            next.par = state.par - tau * dpar;
            next.z = state.z - tau * dz0;
            std::array<Complex, 2> r2;
            std::array<Complex, 4> j2;
            residual(next, r2, j2);
            double n2 = std::abs(r2[0]) + std::abs(r2[1]);
            if (std::isfinite(n2) && n2 < rnorm) break;
            tau *= 0.5;
        }
        state = next;
        double scale = std::max(1.0, std::abs(state.par));
        if (tau * (std::abs(dpar) + std::abs(dz0)) <= 1e-14 * scale && rnorm < 1e-8) return state;
    }
    fail("NoConvergence", "cycle system Newton did not converge");
}

inline Complex cycle_seed(const ParameterSpace& space, int k, Complex par) {
    DynamicalSystem sys = space.system_at(par);
    const double radius = sys.escape_radius();
    Complex z = sys.free_critical_point();
    Complex last = z;
    for (int j = 0; j < 96 * std::max(1, k); ++j) {
        z = sys.apply(z);
        if (!finite(z) || std::abs(z) > radius) break;
        last = z;
    }
    try {
        Cycle c = find_cycle(sys, k, last);
        if (c.period == k) return c.points.front();
    } catch (const Error&) {
    }
    return last;
}

struct MisiurewiczCheck {
    int preperiod = 0; // minimal l at the parameter
    int period = 1;    // minimal point period (divides the angle period)
    Complex multiplier{0.0, 0.0};
};

/// Verify that par is a Misiurewicz parameter of preperiod exactly l with
/// point period dividing k: polish the cycle with Newton and test the
/// critical orbit against the polished cycle points. (Immune to the raw
/// revisit-residual noise, which grows with the orbit magnitudes.)
inline MisiurewiczCheck verify_misiurewicz(const ParameterSpace& space, Complex par, int l,
                                           int k) {
    DynamicalSystem sys = space.system_at(par);
    // Only the first l+k points are meaningful: past the landing the
    // deviation is amplified by the cycle multiplier every lap and the
    // numeric orbit leaves the cycle.
    std::vector<Complex> orbit{sys.critical_value()};
    double scale = std::max(1.0, std::abs(par));
    for (int j = 0; j < l + k; ++j) {
        orbit.push_back(sys.apply(orbit.back()));
        if (!finite(orbit.back())) fail("WrongMinimality", "critical orbit blew up");
        scale = std::max(scale, std::abs(orbit.back()));
    }
    Cycle cyc;
    try {
        cyc = find_cycle(sys, k, orbit[static_cast<std::size_t>(l)]);
    } catch (const Error&) {
        fail("WrongMinimality", "no polished cycle at the candidate parameter");
    }
    check(k % cyc.period == 0, "WrongMinimality", "point period does not divide the target");
    check(std::abs(cyc.multiplier) > 1.0 + 1e-9, "WrongMinimality",
          "landing cycle is not repelling");
    // The exact landing sits at rounding level of the polished cycle
    // (noise ~ 1e-9 * scale^2), far below genuine near-misses.
    const double on_tol = 1e-7 * std::max(1.0, scale * scale);
    auto on_cycle = [&](Complex w) {
        for (const Complex& zc : cyc.points)
            if (std::abs(w - zc) < on_tol) return true;
        return false;
    };
    int l_min = 0;
    while (l_min <= l && !on_cycle(orbit[static_cast<std::size_t>(l_min)])) ++l_min;
    check(l_min == l, "WrongMinimality",
          "critical value lands after " + std::to_string(l_min) + " steps, wanted " +
              std::to_string(l));
    return MisiurewiczCheck{l, cyc.period, cyc.multiplier};
}

} // namespace detail

/// Newton solve for centers, roots, and Misiurewicz parameters.
/// misiurewicz(l, k): f^{l+k}(v) = f^l(v) with v the free critical value;
/// minimality is verified against the critical-orbit classification.
inline Complex solve_special(const ParameterSpace& space, const SpecialTarget& target,
                             Complex seed) {
    switch (target.kind) {
        case SpecialTarget::Kind::center: {
            Complex par =
                detail::param_newton(space, false, 0, target.period, seed);
            auto cls = classify_critical_orbit(space.system_at(par), 4096, 1e-9);
            check(cls.kind == CriticalOrbitClass::Kind::attracted &&
                      cls.period == target.period && std::abs(cls.multiplier) < 1e-8,
                  "WrongMinimality", "center has wrong minimal period");
            return par;
        }
        case SpecialTarget::Kind::misiurewicz: {
            // l = 0 is the case of a periodic critical value (the free
            // critical point itself is then strictly preperiodic).
            check(target.preperiod >= 0, "BadArgument", "misiurewicz preperiod must be >= 0");
            Complex par = detail::param_newton(space, true, target.preperiod,
                                               target.preperiod + target.period, seed);
            // The point period may properly divide the requested one: rays
            // landing at a periodic point carry angle periods that are
            // multiples of the point period (q rays at a branch point are
            // permuted cyclically).
            detail::verify_misiurewicz(space, par, target.preperiod, target.period);
            return par;
        }
        case SpecialTarget::Kind::root: {
            detail::TwoVarState st{seed, detail::cycle_seed(space, target.period, seed)};
            st = detail::cycle_system_newton(space, target.period, Complex{1.0, 0.0}, st);
            return st.par;
        }
    }
    fail("BadArgument", "unknown solve target");
}

/// Parameter on a hyperbolic component with cycle multiplier t, by damped
/// Newton on the cycle system seeded from the center (with multiplier
/// continuation for stubborn targets).
inline Complex multiplier_param(const ParameterSpace& space, const ComponentRecord& component,
                                Complex t) {
    check(std::abs(t) <= 1.0 + 1e-12, "BadArgument", "|t| must be <= 1");
    DynamicalSystem sys = space.system_at(component.center);
    detail::TwoVarState st{component.center, sys.free_critical_point()};
    for (int steps : {1, 4, 16}) {
        detail::TwoVarState attempt = st;
        bool ok = true;
        for (int s = 1; s <= steps && ok; ++s) {
            Complex ts = t * (double(s) / steps);
            try {
                attempt = detail::cycle_system_newton(space, component.period, ts, attempt);
            } catch (const Error&) {
                ok = false;
            }
        }
        if (ok) return attempt.par;
    }
    fail("NoConvergence", "multiplier Newton did not converge");
}

/// Locate the hyperbolic component whose root the seed approximates
/// (typically a ray landing): superattracting-center Newton first, with the
/// root recovered by multiplier continuation t: 0 -> 1 from the center.
inline ComponentRecord component_from_root(const ParameterSpace& space, int period,
                                           Complex root_seed) {
    ComponentRecord rec;
    rec.space = space;
    rec.period = period;

    bool have_center = false;
    for (double eps : {0.0, 1e-3, -1e-3, 3e-3, -3e-3, 1e-2, -1e-2, 3e-2, -3e-2}) {
        try {
            Complex seed = root_seed * (1.0 + eps) + Complex(0.0, eps);
            rec.center = solve_special(space, SpecialTarget::center(period), seed);
            have_center = true;
            break;
        } catch (const Error&) {
        }
    }
    if (!have_center) {
        // The center Newton can stall near parabolic seeds; go through the
        // root system and multiplier continuation 1 -> 0 instead.
        Complex root = solve_special(space, SpecialTarget::root(period), root_seed);
        check(std::abs(root - root_seed) < 0.3 * (1.0 + std::abs(root_seed)), "NoConvergence",
              "root Newton left the seeded component");
        detail::TwoVarState st{root, detail::cycle_seed(space, period, root)};
        for (int s = 7; s >= 0; --s)
            st = detail::cycle_system_newton(space, period, Complex{s / 8.0, 0.0}, st);
        auto cls = classify_critical_orbit(space.system_at(st.par), 4096, 1e-9);
        check(cls.kind == CriticalOrbitClass::Kind::attracted && cls.period == period &&
                  std::abs(cls.multiplier) < 1e-8,
              "NoConvergence", "continuation did not reach a superattracting center");
        rec.center = st.par;
        rec.root = root;
        return rec;
    }

    // Root by continuation from the center; near multiplier 1 the system
    // degenerates at satellite corners, so keep the seed as a fallback.
    rec.root = root_seed;
    try {
        detail::TwoVarState st{rec.center,
                               space.system_at(rec.center).free_critical_point()};
        for (int s = 1; s <= 8; ++s)
            st = detail::cycle_system_newton(space, period, Complex{s / 8.0, 0.0}, st);
        if (std::abs(st.par - root_seed) < 0.3 * (1.0 + std::abs(root_seed))) rec.root = st.par;
    } catch (const Error&) {
    }
    return rec;
}

/// Trace a parameter ray and polish the landing to the Misiurewicz
/// parameter of the angle's orbit type; the polish must stay within the
/// landing tolerance of the traced estimate.
/// (The default trace depth covers weakly repelling landings such as limb
/// branch points, where the approach speed is only G^{log|rho|/log d}.)
inline MisiurewiczRecord misiurewicz_from_ray(const ParameterSpace& space, const Angle& theta,
                                              double g_min = 1e-14, double match_tol = 1e-5) {
    int d = space.kind == ParameterSpace::Kind::mandelbrot ? 2 : space.q + 1;
    OrbitType ot = orbit_type(theta, static_cast<unsigned long>(d));
    check(ot.preperiod >= 1, "BadArgument",
          "angle " + theta.str() + " is not strictly preperiodic under m_" + std::to_string(d));
    RayTrace ray = trace_param_ray(space, theta, g_min);
    check(ray.status != RayTrace::Status::diverged, "NoConvergence", "ray trace diverged");
    Complex par = solve_special(
        space,
        SpecialTarget::misiurewicz(static_cast<int>(ot.preperiod), static_cast<int>(ot.period)),
        ray.landing_estimate);
    // The match tolerance scales with the parameter magnitude: near large
    // |lambda| the similarity constant between potential and distance is
    // itself of order |lambda|-powers.
    check(std::abs(par - ray.landing_estimate) < match_tol * std::max(1.0, std::abs(par)),
          "LandingMismatch",
          "polished Misiurewicz parameter is too far from the ray landing");
    // Record the minimal orbit type at the solved parameter (the angle
    // period is a multiple of the point period).
    auto chk = detail::verify_misiurewicz(space, par, static_cast<int>(ot.preperiod),
                                          static_cast<int>(ot.period));
    MisiurewiczRecord rec;
    rec.space = space;
    rec.preperiod = chk.preperiod;
    rec.period = chk.period;
    rec.parameter = par;
    rec.angles = {theta};
    return rec;
}

/// Hyperbolic-component data transported by phi_{p/q}: the image angles
/// under Theta, the locus component they bound, and the parameter at the
/// requested internal argument.
struct PhiResult {
    Rational u_minus{0};
    Rational u_plus{0};
    int locus_period = 1;
    Complex locus_root{0.0, 0.0};
    ComponentRecord component;
    Complex lambda{0.0, 0.0};
};

/// Realize phi_{p/q} on hyperbolic data: transport the component's root
/// angles through Theta_{p/q}, locate the corresponding component of
/// L_{q,0} by its two parameter rays, and match the internal argument
/// (the cycle multiplier is preserved).
inline PhiResult phi_numeric(const LimbCombinatorics& limb,
                             const std::pair<Angle, Angle>& root_angles, Complex t,
                             double g_min = 1e-8) {
    const long q = limb.q;
    for (const Angle& a : {root_angles.first, root_angles.second}) {
        check(limb.in_wake_interval(a), "OutsideWake",
              "root angle " + a.str() + " outside the wake interval");
        check(orbit_type(a, 2).preperiod == 0, "BadArgument",
              "root angle " + a.str() + " must have odd denominator");
    }

    PhiResult out;
    out.u_minus = theta_limb(limb, root_angles.first);
    out.u_plus = theta_limb(limb, root_angles.second);

    ParameterSpace loc = ParameterSpace::locus(static_cast<int>(q));
    if (out.u_minus == 0 && out.u_plus == 1) {
        // The limb's own root pair: the image component is the main
        // component of the 0-limb, rooted at lambda = 1.
        out.locus_period = 1;
        out.locus_root = {1.0, 0.0};
        out.component = component_from_root(loc, 1, {1.0, 0.0});
    } else {
        OrbitType om = orbit_type(Angle(out.u_minus), static_cast<unsigned long>(q + 1));
        OrbitType op = orbit_type(Angle(out.u_plus), static_cast<unsigned long>(q + 1));
        check(om.preperiod == 0 && op.preperiod == 0 && om.period == op.period,
              "BadArgument", "transported angles are not a periodic pair");
        out.locus_period = static_cast<int>(om.period);
        RayTrace ra = trace_param_ray(loc, Angle(out.u_minus), g_min);
        RayTrace rb = trace_param_ray(loc, Angle(out.u_plus), g_min);
        check(std::abs(ra.landing_estimate - rb.landing_estimate) < 0.1, "LandingMismatch",
              "image root rays do not land together");
        out.locus_root = 0.5 * (ra.landing_estimate + rb.landing_estimate);
        out.component = component_from_root(loc, out.locus_period, out.locus_root);
        out.locus_root = out.component.root;
    }
    out.component.root_angles = {{Angle(out.u_minus), Angle(out.u_plus)}};
    out.lambda = multiplier_param(loc, out.component, t);
    return out;
}

inline PhiResult phi_numeric(long p, long q, const std::pair<Angle, Angle>& root_angles,
                             Complex t, double g_min = 1e-8) {
    return phi_numeric(limb_combinatorics(p, q), root_angles, t, g_min);
}

/// The involution on Misiurewicz data: land R_M(theta_bar(theta)) and
/// polish with the image angle's own orbit type. (What theta_bar preserves
/// exactly is the first-return orbit data; the doubling orbit type can
/// change, e.g. 1/4 of type (2,1) maps to 1/6 of type (1,2) in the
/// 1/3-limb.)
inline MisiurewiczRecord involution_misiurewicz(const LimbCombinatorics& limb,
                                                const Angle& theta, double g_min = 1e-14,
                                                double match_tol = 1e-5) {
    OrbitType before = orbit_type(theta, 2);
    check(before.preperiod >= 1, "BadArgument", "involution on Misiurewicz data needs an "
                                                "even-denominator angle");
    Angle image = theta_bar(limb, theta);
    // The first-return coding is what the involution transports.
    Angle inner_from = double_angle_iter(theta, static_cast<unsigned long>(limb.q - 1));
    Angle inner_to = double_angle_iter(image, static_cast<unsigned long>(limb.q - 1));
    OrbitType fr_before = first_return_orbit_type(limb, inner_from);
    OrbitType fr_after = first_return_orbit_type(limb, inner_to);
    check(fr_before == fr_after, "WrongMinimality",
          "theta_bar must preserve the first-return orbit type");
    MisiurewiczRecord rec =
        misiurewicz_from_ray(ParameterSpace::mandelbrot(), image, g_min, match_tol);
    rec.angles = {image};
    return rec;
}

/// The involution on hyperbolic data: transport the root angles by
/// theta_bar (the pair swaps), re-solve the component, and evaluate the
/// conjugate internal argument (the involution is anti-holomorphic).
inline ComponentRecord involution_component(const LimbCombinatorics& limb,
                                            const std::pair<Angle, Angle>& root_angles,
                                            double g_min = 1e-8) {
    Angle im_minus = theta_bar(limb, root_angles.second);
    Angle im_plus = theta_bar(limb, root_angles.first);
    OrbitType om = orbit_type(im_minus, 2);
    OrbitType op = orbit_type(im_plus, 2);
    check(om.preperiod == 0 && op.preperiod == 0 && om.period == op.period, "BadArgument",
          "transported root angles are not a periodic pair");
    int k = static_cast<int>(om.period);
    ParameterSpace mand = ParameterSpace::mandelbrot();
    RayTrace ra = trace_param_ray(mand, im_minus, g_min);
    RayTrace rb = trace_param_ray(mand, im_plus, g_min);
    check(std::abs(ra.landing_estimate - rb.landing_estimate) < 0.1, "LandingMismatch",
          "image root rays do not land together");
    ComponentRecord rec =
        component_from_root(mand, k, 0.5 * (ra.landing_estimate + rb.landing_estimate));
    rec.root_angles = {{im_minus, im_plus}};
    return rec;
}

inline Complex involution_hyperbolic(const LimbCombinatorics& limb,
                                     const std::pair<Angle, Angle>& root_angles, Complex t,
                                     double g_min = 1e-8) {
    ComponentRecord rec = involution_component(limb, root_angles, g_min);
    return multiplier_param(ParameterSpace::mandelbrot(), rec, std::conj(t));
}

} // namespace limbs
