#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "blowuplab/errors.hpp"

namespace blowuplab {

/// Relative separation floor for "pairwise distinct" inputs.
inline constexpr double kSepTol = 1e-9;
/// Tolerance for algebraic identities that hold exactly in real arithmetic.
inline constexpr double kIdTol = 1e-10;
/// Equality tolerance for the gap classification (relative to exponent scale).
inline constexpr double kEqTol = 1e-12;

namespace detail {

/// Signed product accumulator with an explicit binary exponent, so that
/// products of hundreds of factors of any magnitude neither overflow nor
/// underflow. Equivalent to sign/log-magnitude bookkeeping but without the
/// exp/log round-off: the mantissa carries full double precision.
class ScaledProduct {
public:
    void mul(double factor) {
        if (factor == 0.0) {
            zero_ = true;
            return;
        }
        mantissa_ *= factor;
        int e = 0;
        mantissa_ = std::frexp(mantissa_, &e);
        exponent_ += e;
    }

    bool is_zero() const { return zero_; }
    int sign() const { return zero_ ? 0 : (mantissa_ < 0.0 ? -1 : 1); }

    /// ln|product|; -inf when the product is zero.
    double log_abs() const {
        if (zero_) return -std::numeric_limits<double>::infinity();
        return std::log(std::fabs(mantissa_)) +
               static_cast<double>(exponent_) * 0.6931471805599453094;
    }

    /// The product as a double (0, +-inf when out of range).
    double value() const {
        if (zero_) return 0.0;
        return std::ldexp(mantissa_, static_cast<int>(std::clamp<std::int64_t>(
                                         exponent_, -1074, 1024)));
    }

    /// Ratio of two accumulated products, evaluated at full precision.
    static double ratio(const ScaledProduct& num, const ScaledProduct& den) {
        if (num.zero_) return 0.0;
        const std::int64_t e = num.exponent_ - den.exponent_;
        return std::ldexp(num.mantissa_ / den.mantissa_,
                          static_cast<int>(std::clamp<std::int64_t>(e, -1074, 1024)));
    }

private:
    double mantissa_ = 1.0;
    std::int64_t exponent_ = 0;
    bool zero_ = false;
};

/// Kahan compensated accumulator.
class KahanSum {
public:
    void add(double x) {
        const double y = x - c_;
        const double t = s_ + y;
        c_ = (t - s_) - y;
        s_ = t;
    }
    double value() const { return s_; }

private:
    double s_ = 0.0;
    double c_ = 0.0;
};

/// min_{i!=j} |v_i - v_j| >= kSepTol * max(1, max|v_i|)?
inline bool pairwise_separated(std::span<const double> v, double tol = kSepTol) {
    std::vector<double> s(v.begin(), v.end());
    std::sort(s.begin(), s.end());
    double scale = 1.0;
    for (double x : s) scale = std::max(scale, std::fabs(x));
    for (std::size_t i = 1; i < s.size(); ++i) {
        if (s[i] - s[i - 1] < tol * scale) return false;
    }
    return true;
}

inline void require_separated(std::span<const double> v, const char* what) {
    if (!pairwise_separated(v)) {
        throw SeparationViolation(std::string(what) +
                                  ": coordinates are not pairwise distinct at the "
                                  "relative separation floor");
    }
}

/// Attempts to reconstruct a finite double as an exact small dyadic
/// rational p/q (q a power of two, |p|,q <= 2^40). Every finite double is
/// p * 2^e, so this succeeds precisely for "small rational" inputs such as
/// -1/2 or 7/4 and fails for irrationals-in-intent like 0.1.
struct SmallRational {
    std::int64_t p = 0;
    std::int64_t q = 1;
    bool ok = false;
};

inline SmallRational to_small_rational(double x) {
    SmallRational r;
    if (!std::isfinite(x)) return r;
    if (x == 0.0) {
        r.p = 0;
        r.q = 1;
        r.ok = true;
        return r;
    }
    int e = 0;
    double m = std::frexp(x, &e); // x = m * 2^e, |m| in [0.5, 1)
    // peel the mantissa into an integer
    std::int64_t p = 0;
    int shift = 0;
    while (m != std::floor(m) && shift < 60) {
        m *= 2.0;
        ++shift;
    }
    if (m != std::floor(m)) return r;
    p = static_cast<std::int64_t>(m);
    const int ez = e - shift;
    constexpr std::int64_t lim = std::int64_t(1) << 40;
    if (ez >= 0) {
        if (ez > 40) return r;
        const std::int64_t f = std::int64_t(1) << ez;
        if (std::llabs(p) > lim / f) return r;
        r.p = p * f;
        r.q = 1;
    } else {
        if (-ez > 40) return r;
        r.p = p;
        r.q = std::int64_t(1) << (-ez);
        if (std::llabs(r.p) > lim || r.q > lim) return r;
    }
    r.ok = true;
    return r;
}

/// Exact rational arithmetic on __int128 with overflow detection. Used only
/// to decide integer-ness of weights when all inputs reconstruct as small
/// dyadic rationals; any overflow simply disables the exact path.
class Rational128 {
public:
    Rational128() = default;
    Rational128(__int128 p, __int128 q) : num_(p), den_(q) { normalize(); }

    bool valid() const { return valid_; }

    Rational128& mul(const Rational128& o) {
        if (!valid_ || !o.valid_) {
            valid_ = false;
            return *this;
        }
        // cross-reduce before multiplying to delay overflow
        __int128 a = num_, b = den_, c = o.num_, d = o.den_;
        reduce(a, d);
        reduce(c, b);
        if (mul_overflows(a, c) || mul_overflows(b, d)) {
            valid_ = false;
            return *this;
        }
        num_ = a * c;
        den_ = b * d;
        normalize();
        return *this;
    }

    bool is_integer() const { return valid_ && den_ == 1; }
    bool is_zero() const { return valid_ && num_ == 0; }
    bool is_odd_integer() const { return is_integer() && (num_ & 1) != 0; }

private:
    static __int128 gcd128(__int128 a, __int128 b) {
        if (a < 0) a = -a;
        if (b < 0) b = -b;
        while (b != 0) {
            __int128 t = a % b;
            a = b;
            b = t;
        }
        return a;
    }
    static void reduce(__int128& a, __int128& b) {
        const __int128 g = gcd128(a, b);
        if (g > 1) {
            a /= g;
            b /= g;
        }
    }
    static bool mul_overflows(__int128 a, __int128 b) {
        if (a == 0 || b == 0) return false;
        constexpr __int128 lim = (__int128(1) << 100);
        __int128 aa = a < 0 ? -a : a, bb = b < 0 ? -b : b;
        return aa > lim / bb;
    }
    void normalize() {
        if (den_ == 0) {
            valid_ = false;
            return;
        }
        if (den_ < 0) {
            den_ = -den_;
            num_ = -num_;
        }
        reduce(num_, den_);
    }

    __int128 num_ = 0;
    __int128 den_ = 1;
    bool valid_ = true;
};

} // namespace detail
} // namespace blowuplab
