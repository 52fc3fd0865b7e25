#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "limbs/rational.hpp"

namespace limbs {

/// Exact point of the circle R/Z. Always stored reduced and in [0, 1).
class Angle {
public:
    Angle() : v_(0) {}

    explicit Angle(const Rational& r) : v_(frac(r)) {}

    Angle(long num, long den) : v_(frac(make_rational(num, den))) {}

    static std::optional<Angle> try_parse(std::string_view s) {
        auto slash = s.find('/');
        std::string num, den = "1";
        if (slash == std::string_view::npos) {
            num = std::string(s);
        } else {
            num = std::string(s.substr(0, slash));
            den = std::string(s.substr(slash + 1));
        }
        if (num.empty() || den.empty()) return std::nullopt;
        auto digits = [](const std::string& t) {
            std::size_t i = (t[0] == '-' || t[0] == '+') ? 1 : 0;
            if (i == t.size()) return false;
            for (; i < t.size(); ++i)
                if (t[i] < '0' || t[i] > '9') return false;
            return true;
        };
        if (!digits(num) || !digits(den)) return std::nullopt;
        BigInt n(num), d(den);
        if (d == 0) return std::nullopt;
        return Angle(make_rational(n, d));
    }

    static Angle parse(std::string_view s) {
        auto a = try_parse(s);
        check(a.has_value(), "BadAngle", "cannot parse angle '" + std::string(s) + "'");
        return *a;
    }

    const Rational& value() const noexcept { return v_; }
    BigInt num() const { return v_.get_num(); }
    BigInt den() const { return v_.get_den(); }

    bool operator==(const Angle& o) const { return v_ == o.v_; }
    bool operator!=(const Angle& o) const { return v_ != o.v_; }
    bool operator<(const Angle& o) const { return v_ < o.v_; }
    bool operator<=(const Angle& o) const { return v_ <= o.v_; }
    bool operator>(const Angle& o) const { return v_ > o.v_; }
    bool operator>=(const Angle& o) const { return v_ >= o.v_; }

    Angle operator+(const Angle& o) const { return Angle(v_ + o.v_); }
    Angle operator-(const Angle& o) const { return Angle(v_ - o.v_); }

    /// Antipode t + 1/2, i.e. the argument of -z.
    Angle antipode() const { return Angle(v_ + make_rational(1, 2)); }

    std::string str() const { return to_string(v_); }

    double turns() const { return to_double(v_); }

private:
    Rational v_;
};

/// m_d: t -> d*t mod 1, exact.
inline Angle multiply_angle(const Angle& t, unsigned long d) {
    check(d >= 2, "BadDegree", "multiplier must be >= 2");
    return Angle(t.value() * Rational(BigInt(d)));
}

/// 2^k * t mod 1, exact.
inline Angle double_angle_iter(const Angle& t, unsigned long k) {
    return Angle(t.value() * pow2(k));
}

struct OrbitType {
    std::int64_t preperiod = 0; // l
    std::int64_t period = 1;    // k
    bool operator==(const OrbitType&) const = default;
};

/// Minimal (l, k) with m_d^{l+k}(t) = m_d^l(t). Rational angles are always
/// eventually periodic under m_d; l = 0 iff den(t) is coprime to d.
inline OrbitType orbit_type(const Angle& t, unsigned long d) {
    std::map<Rational, std::int64_t> seen;
    Angle x = t;
    std::int64_t n = 0;
    for (;;) {
        auto it = seen.find(x.value());
        if (it != seen.end()) return OrbitType{it->second, n - it->second};
        seen.emplace(x.value(), n);
        x = multiply_angle(x, d);
        ++n;
    }
}

/// Forward orbit t, m_d(t), ..., up to (and including) the first repeat.
inline std::vector<Angle> orbit(const Angle& t, unsigned long d) {
    OrbitType ot = orbit_type(t, d);
    std::vector<Angle> out;
    out.reserve(static_cast<std::size_t>(ot.preperiod + ot.period));
    Angle x = t;
    for (std::int64_t i = 0; i < ot.preperiod + ot.period; ++i) {
        out.push_back(x);
        x = multiply_angle(x, d);
    }
    return out;
}

} // namespace limbs
