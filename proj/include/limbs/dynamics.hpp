#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <vector>

#include "limbs/angle.hpp"

namespace limbs {

using Complex = std::complex<double>;

inline Complex cpow_int(Complex base, int e) {
    Complex r{1.0, 0.0};
    while (e > 0) {
        if (e & 1) r *= base;
        base *= base;
        e >>= 1;
    }
    return r;
}

/// One of the three polynomial families: Q_c(z) = z^2 + c,
/// P_{q,lambda}(z) = lambda z (1 + z/q)^q, or the monic representative
/// P~_{q,nu}(z) = z (z + nu)^q with lambda = nu^q.
struct DynamicalSystem {
    enum class Kind { quadratic, family, monic };

    Kind kind = Kind::quadratic;
    int q = 0;
    Complex param{0.0, 0.0}; // c, lambda, or nu

    static DynamicalSystem quadratic(Complex c) { return {Kind::quadratic, 0, c}; }
    static DynamicalSystem family(int q, Complex lambda) {
        check(q >= 2, "BadLimb", "family needs q >= 2");
        return {Kind::family, q, lambda};
    }
    static DynamicalSystem monic(int q, Complex nu) {
        check(q >= 2, "BadLimb", "monic family needs q >= 2");
        return {Kind::monic, q, nu};
    }

    int degree() const { return kind == Kind::quadratic ? 2 : q + 1; }

    Complex apply(Complex z) const {
        switch (kind) {
            case Kind::quadratic: return z * z + param;
            case Kind::family: return param * z * cpow_int(1.0 + z / double(q), q);
            case Kind::monic: return z * cpow_int(z + param, q);
        }
        return z;
    }

    Complex derivative(Complex z) const {
        switch (kind) {
            case Kind::quadratic: return 2.0 * z;
            case Kind::family:
                return param * cpow_int(1.0 + z / double(q), q - 1) *
                       (1.0 + z * double(q + 1) / double(q));
            case Kind::monic:
                return cpow_int(z + param, q - 1) * (double(q + 1) * z + param);
        }
        return 0.0;
    }

    Complex second_derivative(Complex z) const {
        switch (kind) {
            case Kind::quadratic: return 2.0;
            case Kind::family:
                return param / double(q) * cpow_int(1.0 + z / double(q), q - 2) *
                       (double(q + 1) * z + 2.0 * double(q));
            case Kind::monic:
                return double(q) * cpow_int(z + param, q - 2) *
                       (double(q + 1) * z + 2.0 * param);
        }
        return 0.0;
    }

    /// The free critical point: 0, -q/(q+1), or -nu/(q+1).
    Complex free_critical_point() const {
        switch (kind) {
            case Kind::quadratic: return 0.0;
            case Kind::family: return Complex(-double(q) / double(q + 1), 0.0);
            case Kind::monic: return -param / double(q + 1);
        }
        return 0.0;
    }

    Complex critical_value() const { return apply(free_critical_point()); }

    std::vector<std::pair<Complex, int>> critical_points() const {
        switch (kind) {
            case Kind::quadratic: return {{Complex(0.0, 0.0), 1}};
            case Kind::family:
                return {{Complex(-double(q), 0.0), q - 1}, {free_critical_point(), 1}};
            case Kind::monic: return {{-param, q - 1}, {free_critical_point(), 1}};
        }
        return {};
    }

    /// Radius R with |z| > R  =>  |f(z)| > 2|z|, so escape past R is
    /// monotone and definitive. (For Q_c this also certifies the 2|z|
    /// growth bound, unlike the classical max(2,|c|).)
    double escape_radius() const {
        switch (kind) {
            case Kind::quadratic: return 1.0 + std::sqrt(1.0 + std::abs(param));
            case Kind::family:
                return double(q) * (1.0 + std::pow(2.0 / std::abs(param), 1.0 / double(q)));
            case Kind::monic: return std::abs(param) + std::pow(2.0, 1.0 / double(q));
        }
        return 2.0;
    }

    bool family_on_negative_axis() const {
        return kind == Kind::family && param.imag() == 0.0 && param.real() <= 0.0;
    }

    /// Monic-normalized model used for Boettcher data. For the family this
    /// is the affine conjugate P~_{q,nu} with nu the principal q-th root of
    /// lambda; undefined on the negative real axis.
    DynamicalSystem model() const {
        if (kind != Kind::family) return *this;
        check(!family_on_negative_axis(), "Unsupported",
              "Boettcher normalization of P_{q,lambda} needs lambda outside R_-");
        Complex nu = std::pow(param, 1.0 / double(q));
        return monic(q, nu);
    }

    /// Conjugation z -> (nu/q) z onto the model plane (identity otherwise).
    Complex to_model(Complex z) const {
        if (kind != Kind::family) return z;
        Complex nu = std::pow(param, 1.0 / double(q));
        return nu / double(q) * z;
    }

    Complex from_model(Complex w) const {
        if (kind != Kind::family) return w;
        Complex nu = std::pow(param, 1.0 / double(q));
        return double(q) / nu * w;
    }
};

struct EscapeResult {
    bool escaped = false;
    int iterations = 0;     // first n with |z_n| beyond the escape radius
    double potential = 0.0; // Green's function value, 0 if not escaped
    double ext_argument = 0.0; // in [0,1), valid only if escaped
};

namespace detail {

inline double arg_turns(Complex z) {
    double t = std::atan2(z.imag(), z.real()) / (2.0 * std::numbers::pi);
    t -= std::floor(t);
    return t;
}

} // namespace detail

/// Escape analysis with Boettcher data. The potential comes from the
/// far-field limit log|z_n|/d^n; the external argument from the coarse
/// argument of the far iterate pulled back through the stored orbit,
/// choosing the nearest d-th root branch at each step.
inline EscapeResult escape_analyze(const DynamicalSystem& sys, Complex z0, int max_iter) {
    check(max_iter >= 1, "BadArgument", "max_iter must be >= 1");
    DynamicalSystem m = sys.model();
    Complex z = sys.to_model(z0);
    const double radius = m.escape_radius();
    const int d = m.degree();

    std::vector<Complex> orbit{z};
    int esc = -1;
    for (int n = 0; n <= max_iter; ++n) {
        if (std::abs(orbit.back()) > radius) {
            esc = n;
            break;
        }
        if (n == max_iter) break;
        orbit.push_back(m.apply(orbit.back()));
    }
    if (esc < 0) return EscapeResult{false, max_iter, 0.0, 0.0};

    // Push into the far field where the Boettcher coordinate is the
    // identity; the stop radius keeps the next iterate below overflow.
    const double far_stop = d <= 14 ? 1e18 : 1e10;
    while (std::abs(orbit.back()) < far_stop) orbit.push_back(m.apply(orbit.back()));

    const std::size_t far = orbit.size() - 1;
    double potential = std::log(std::abs(orbit[far]));
    for (std::size_t i = 0; i < far; ++i) potential /= d;

    double t = detail::arg_turns(orbit[far]);
    for (std::size_t n = far; n-- > 0;) {
        double guide = detail::arg_turns(orbit[n]);
        double j = std::round(guide * d - t);
        t = (t + j) / d;
        t -= std::floor(t);
    }
    return EscapeResult{true, esc, potential, t};
}

struct RayTrace {
    struct Sample {
        double potential;
        Complex point;
    };
    enum class Status { landed, diverged, max_steps };

    std::vector<Sample> samples;
    Angle target_argument;
    Complex landing_estimate{0.0, 0.0};
    Status status = Status::max_steps;
};

namespace detail {

/// First-order Boettcher inverse at large potential: the ray point at
/// potential G and argument t (turns) for a monic-normalized system.
inline Complex bottcher_point(const DynamicalSystem& m, double big_g, double t_turns) {
    Complex w = std::polar(std::exp(big_g), 2.0 * std::numbers::pi * t_turns);
    if (m.kind == DynamicalSystem::Kind::quadratic) return w - m.param / (2.0 * w);
    return w - double(m.q) / double(m.q + 1) * m.param;
}

/// Newton solve f^n(z) = target from seed; returns success. Convergence is
/// judged by the z-space correction |F/F'| (the top-level residual is
/// amplified by d^n and cannot reach fixed precision in doubles).
inline bool ray_newton(const DynamicalSystem& m, int n, Complex target, Complex& z) {
    for (int it = 0; it < 64; ++it) {
        Complex w = z, dw{1.0, 0.0};
        for (int j = 0; j < n; ++j) {
            dw *= m.derivative(w);
            w = m.apply(w);
        }
        Complex err = w - target;
        if (!std::isfinite(err.real()) || !std::isfinite(err.imag())) return false;
        if (dw == Complex{0.0, 0.0}) return false;
        Complex step = err / dw;
        if (!std::isfinite(step.real()) || !std::isfinite(step.imag())) return false;
        double scale = std::max(1.0, std::abs(z));
        if (std::abs(step) > 0.5 * scale) return false; // outside the basin
        z -= step;
        if (std::abs(step) <= 1e-13 * scale) return true;
    }
    return false;
}

} // namespace detail

/// Trace the dynamical-plane external ray of argument theta from potential
/// G_start down to G_min. The point at potential G solves f^n(z) = (explicit
/// Boettcher point at potential d^n G, argument d^n theta); the angle orbit
/// upstairs is computed exactly on rationals.
inline RayTrace trace_dyn_ray(const DynamicalSystem& sys, const Angle& theta, double g_start,
                              double g_min, int steps_per_halving) {
    check(g_start > g_min && g_min > 0, "BadArgument", "need G_start > G_min > 0");
    check(steps_per_halving >= 1, "BadArgument", "steps_per_halving must be >= 1");
    DynamicalSystem m = sys.model();
    const int d = m.degree();
    g_start = std::min(g_start, 600.0 / d); // keep e^{d G_start} below overflow

    RayTrace trace;
    trace.target_argument = theta;

    auto top_target = [&](double g) {
        int n = 0;
        double gt = g;
        Angle a = theta;
        while (gt < g_start - 1e-14) {
            gt *= d;
            a = multiply_angle(a, static_cast<unsigned long>(d));
            ++n;
        }
        return std::pair<int, Complex>(n, detail::bottcher_point(m, gt, a.turns()));
    };

    Complex z = detail::bottcher_point(m, g_start, theta.turns());
    trace.samples.push_back({g_start, sys.from_model(z)});

    const double shrink = std::pow(0.5, 1.0 / steps_per_halving);
    double g_prev = g_start;
    double g_next = g_start * shrink;
    int halvings = 0;
    const int max_total = 20000;

    while (true) {
        if (static_cast<int>(trace.samples.size()) > max_total) {
            trace.status = RayTrace::Status::max_steps;
            break;
        }
        auto [n, target] = top_target(g_next);
        Complex z_try = z;
        if (detail::ray_newton(m, n, target, z_try)) {
            z = z_try;
            trace.samples.push_back({g_next, sys.from_model(z)});
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
            if (++halvings > 20) {
                // Below some potential the orbit shadows a repelling cycle
                // and double precision cannot track the coordinate equation
                // further; if the samples have already converged this is a
                // landing, not a divergence.
                const auto& s = trace.samples;
                double move = s.size() >= 2
                                  ? std::abs(s[s.size() - 1].point - s[s.size() - 2].point)
                                  : 1.0;
                trace.status =
                    move < 1e-6 ? RayTrace::Status::landed : RayTrace::Status::diverged;
                break;
            }
            g_next = std::sqrt(g_prev * g_next); // halve the continuation step
        }
    }
    trace.landing_estimate = trace.samples.back().point;
    return trace;
}

inline RayTrace trace_dyn_ray(const DynamicalSystem& sys, const Angle& theta) {
    return trace_dyn_ray(sys, theta, 26.0, 1e-8, 12);
}

struct Cycle {
    std::vector<Complex> points;
    int period = 1;      // minimal period of the located cycle
    Complex multiplier{0.0, 0.0};
};

/// Newton on z -> f^k(z) - z; the returned cycle is reduced to its minimal
/// period, so callers wanting exact period k must check `period == k`.
inline Cycle find_cycle(const DynamicalSystem& sys, int k, Complex seed) {
    check(k >= 1, "BadArgument", "period must be >= 1");
    Complex z = seed;
    bool converged = false;
    for (int it = 0; it < 256; ++it) {
        Complex w = z, dw{1.0, 0.0};
        for (int j = 0; j < k; ++j) {
            dw *= sys.derivative(w);
            w = sys.apply(w);
        }
        Complex err = w - z;
        Complex denom = dw - 1.0;
        if (denom == Complex{0.0, 0.0}) break;
        Complex step = err / denom;
        if (!std::isfinite(step.real()) || !std::isfinite(step.imag())) break;
        z -= step;
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) break;
        // Converged when the z-space correction is at rounding level (the
        // raw residual is amplified by the orbit magnitudes and need not
        // reach any fixed absolute tolerance).
        if (std::abs(step) <= 1e-12 * std::max(1.0, std::abs(z))) {
            converged = true;
            break;
        }
    }
    if (!converged) fail("NoConvergence", "cycle Newton did not converge");

    int minimal = k;
    for (int mdiv = 1; mdiv < k; ++mdiv) {
        if (k % mdiv != 0) continue;
        Complex w = z;
        for (int j = 0; j < mdiv; ++j) w = sys.apply(w);
        if (std::abs(w - z) < 1e-8 * std::max(1.0, std::abs(z))) {
            minimal = mdiv;
            break;
        }
    }

    Cycle cyc;
    cyc.period = minimal;
    Complex w = z, mult{1.0, 0.0};
    for (int j = 0; j < minimal; ++j) {
        cyc.points.push_back(w);
        mult *= sys.derivative(w);
        w = sys.apply(w);
    }
    cyc.multiplier = mult;
    return cyc;
}

/// Classification of the free critical orbit. Preperiod counts from the
/// critical value, matching the external-argument convention.
struct CriticalOrbitClass {
    enum class Kind { escaping, attracted, preperiodic, unresolved };
    Kind kind = Kind::unresolved;
    int escape_iterations = 0;
    std::int64_t preperiod = 0;
    std::int64_t period = 0;
    Complex multiplier{0.0, 0.0};
};

inline CriticalOrbitClass classify_critical_orbit(const DynamicalSystem& sys, int max_iter,
                                                  double tol) {
    CriticalOrbitClass out;
    const double radius = sys.escape_radius();

    std::vector<Complex> orbit{sys.critical_value()};
    std::ptrdiff_t esc = -1;
    for (int n = 0; n <= max_iter; ++n) {
        if (std::abs(orbit.back()) > radius) {
            esc = n;
            break;
        }
        if (n == max_iter) break;
        orbit.push_back(sys.apply(orbit.back()));
    }

    // Nearby revisit w_{n+j} ~ w_n marks either an exact landing on a
    // repelling cycle or convergence to an attracting one. An exact landing
    // precedes any later roundoff-driven escape (the error along a
    // repelling cycle grows by |multiplier| per period), so an early
    // revisit outranks a late escape. The detection tolerance scales with
    // the orbit magnitudes: the revisit residual of an exactly preperiodic
    // orbit bottoms out at rounding noise amplified by those magnitudes.
    const std::size_t prefix = esc < 0 ? orbit.size() : static_cast<std::size_t>(esc);
    double scale = std::max(1.0, std::abs(sys.param));
    for (std::size_t n = 0; n < prefix; ++n) scale = std::max(scale, std::abs(orbit[n]));
    const double tol_eff = tol * std::max(1.0, scale * scale);
    const std::size_t n_scan = std::min<std::size_t>(prefix, 4096);
    const std::size_t j_max = 96;
    std::size_t hit_n = 0, hit_j = 0;
    for (std::size_t n = 0; n < n_scan && hit_j == 0; ++n)
        for (std::size_t j = 1; j <= j_max && n + j < prefix; ++j)
            if (std::abs(orbit[n + j] - orbit[n]) < tol_eff) {
                hit_n = n;
                hit_j = j;
                break;
            }
    const bool early_hit = hit_j != 0 && (esc < 0 || hit_n + hit_j < static_cast<std::size_t>(esc) / 2);

    if (early_hit) {
        Cycle cyc;
        bool polished = true;
        try {
            cyc = find_cycle(sys, static_cast<int>(hit_j), orbit[hit_n + hit_j]);
        } catch (const Error&) {
            polished = false;
        }
        if (polished) {
            double mod = std::abs(cyc.multiplier);
            if (mod < 1.0 - 1e-9 && esc < 0) {
                out.kind = CriticalOrbitClass::Kind::attracted;
                out.period = cyc.period;
                out.multiplier = cyc.multiplier;
                return out;
            }
            if (mod > 1.0 + 1e-9) {
                auto on_cycle = [&](Complex w) {
                    for (const Complex& zc : cyc.points)
                        if (std::abs(w - zc) < 1e-6 * std::max(1.0, std::abs(zc))) return true;
                    return false;
                };
                std::size_t l = 0;
                while (l < prefix && !on_cycle(orbit[l])) ++l;
                if (l < prefix) {
                    out.kind = CriticalOrbitClass::Kind::preperiodic;
                    out.preperiod = static_cast<std::int64_t>(l);
                    out.period = cyc.period;
                    out.multiplier = cyc.multiplier;
                    return out;
                }
            }
        }
    }
    if (esc >= 0) {
        out.kind = CriticalOrbitClass::Kind::escaping;
        out.escape_iterations = static_cast<int>(esc);
        return out;
    }
    return out; // unresolved
}

inline CriticalOrbitClass classify_critical_orbit(const DynamicalSystem& sys) {
    return classify_critical_orbit(sys, 4096, 1e-9);
}

} // namespace limbs
