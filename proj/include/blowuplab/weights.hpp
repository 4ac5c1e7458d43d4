#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "blowuplab/errors.hpp"
#include "blowuplab/numeric.hpp"
#include "blowuplab/quadrature.hpp"

namespace blowuplab {

/// Evaluation point of the generalized inequality: pairwise distinct reals.
/// The valid domain additionally requires every coordinate to be >= 0.
struct XVector {
    std::vector<double> x;

    explicit XVector(std::vector<double> coords) : x(std::move(coords)) {
        if (x.empty()) throw DomainViolation("XVector: needs at least one coordinate");
        detail::require_separated(x, "XVector");
    }

    int n() const { return static_cast<int>(x.size()); }

    bool in_valid_domain() const {
        for (double v : x)
            if (v < 0.0) return false;
        return true;
    }
};

struct WeightVector {
    std::vector<double> a;

    double sum() const {
        detail::KahanSum s;
        for (double v : a) s.add(v);
        return s.value();
    }
};

enum class PointClass {
    Holds,
    Equality,
    Fails,
    UndefinedBase,
    IllDefinedZeroPow,
    DivisionByZeroWeight,
};

inline const char* to_string(PointClass c) {
    switch (c) {
        case PointClass::Holds: return "Holds";
        case PointClass::Equality: return "Equality";
        case PointClass::Fails: return "Fails";
        case PointClass::UndefinedBase: return "UndefinedBase";
        case PointClass::IllDefinedZeroPow: return "IllDefinedZeroPow";
        case PointClass::DivisionByZeroWeight: return "DivisionByZeroWeight";
    }
    return "?";
}

namespace detail {

/// a_i = prod_{j!=i} x_j / prod_{j!=i} (x_j - x_i), via scaled signed
/// products. No separation check here; callers validate.
inline std::vector<double> lagrange_weights_unchecked(std::span<const double> x) {
    const std::size_t n = x.size();
    std::vector<double> a(n);
    for (std::size_t i = 0; i < n; ++i) {
        ScaledProduct num, den;
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i) continue;
            num.mul(x[j]);
            den.mul(x[j] - x[i]);
        }
        a[i] = ScaledProduct::ratio(num, den);
    }
    return a;
}

/// Integer-exponent report for one weight.
struct WeightIntegrality {
    bool is_integer = false;
    bool is_odd = false;      // meaningful only when is_integer
    bool exact_path = false;  // decided by exact rational arithmetic
};

/// Decides whether each a_i is an integer. When every coordinate is an
/// exactly representable small dyadic rational the decision is made in
/// exact rational arithmetic; otherwise |a_i - round(a_i)| <= kIdTol is
/// used as a heuristic.
inline std::vector<WeightIntegrality> weight_integrality(std::span<const double> x,
                                                         std::span<const double> a) {
    const std::size_t n = x.size();
    std::vector<WeightIntegrality> out(n);

    std::vector<SmallRational> rat(n);
    bool all_rational = true;
    for (std::size_t i = 0; i < n; ++i) {
        rat[i] = to_small_rational(x[i]);
        all_rational = all_rational && rat[i].ok;
    }

    for (std::size_t i = 0; i < n; ++i) {
        if (all_rational) {
            Rational128 w(1, 1);
            for (std::size_t j = 0; j < n; ++j) {
                if (j == i) continue;
                // x_j / (x_j - x_i) = (p_j q_i) / (p_j q_i - p_i q_j)
                const __int128 pj_qi = __int128(rat[j].p) * rat[i].q;
                const __int128 pi_qj = __int128(rat[i].p) * rat[j].q;
                w.mul(Rational128(pj_qi, pj_qi - pi_qj));
            }
            if (w.valid()) {
                out[i].is_integer = w.is_integer();
                out[i].is_odd = w.is_odd_integer();
                out[i].exact_path = true;
                continue;
            }
        }
        const double r = std::nearbyint(a[i]);
        out[i].is_integer = std::fabs(a[i] - r) <= kIdTol;
        out[i].is_odd = out[i].is_integer && std::fabs(r) < 9.0e15 &&
                        (static_cast<std::int64_t>(r) % 2 != 0);
    }
    return out;
}

/// base^e for integer e with an exact sign; repeated multiplication keeps
/// small dyadic cases (e.g. 0.75^2 / 0.5) bit-exact.
inline double signed_int_pow(double base, std::int64_t e) {
    const std::int64_t k = std::llabs(e);
    double mag;
    if (k <= 64) {
        mag = 1.0;
        const double b = std::fabs(base);
        for (std::int64_t i = 0; i < k; ++i) mag *= b;
    } else {
        mag = std::pow(std::fabs(base), static_cast<double>(k));
    }
    if (e < 0) mag = 1.0 / mag;
    const bool neg = base < 0.0 && (e % 2 != 0);
    return neg ? -mag : mag;
}

/// (1/n) * prod x_i, the exponent of the right-hand side.
inline double rhs_exponent(std::span<const double> x) {
    ScaledProduct p;
    for (double v : x) p.mul(v);
    return p.value() / static_cast<double>(x.size());
}

/// Gap through the divided-difference integral representation:
///
///   sum a_i ln(1+x_i) = (prod x) * int_0^1 u^{n-1} / prod(1+u x_i) du,
///
/// hence gap = (prod x) * int_0^1 u^{n-1} (1 - e^{-L(u)}) du with
/// L(u) = sum log1p(u x_i). The integrand has one sign on the valid domain,
/// so the result carries full relative accuracy even where the direct
/// formula loses the gap to cancellation. Requires all x_i > -1.
inline double stable_gap(std::span<const double> x) {
    const auto n = static_cast<double>(x.size());
    ScaledProduct p;
    for (double v : x) p.mul(v);
    if (p.is_zero()) return 0.0;

    auto integrand = [&](double u) {
        KahanSum L;
        for (double v : x) L.add(std::log1p(u * v));
        double w = 1.0; // u^{n-1}
        for (std::size_t k = 1; k < x.size(); ++k) w *= u;
        return -w * std::expm1(-L.value());
    };
    const QuadratureResult q =
        integrate_adaptive(integrand, 0.0, 1.0, 1e-305, 1e-13, 4000);
    return p.value() * q.value;
}

/// Noise bound for the directly evaluated gap: a small multiple of machine
/// epsilon times the magnitude of the summed terms.
inline double gap_noise_bound(std::span<const double> x, std::span<const double> a,
                              double rhs_exp) {
    KahanSum t;
    for (std::size_t i = 0; i < x.size(); ++i)
        t.add(std::fabs(a[i] * std::log1p(x[i])));
    const double eps = std::numeric_limits<double>::epsilon();
    return 4.0 * static_cast<double>(x.size() + 1) * eps *
           (t.value() + std::fabs(rhs_exp));
}

} // namespace detail

/// Lagrange weights of the nodes x evaluated at zero:
/// a_i = prod_{j!=i} x_j / prod_{j!=i} (x_j - x_i). Sum to 1.
inline WeightVector lagrange_weights(const XVector& x) {
    return WeightVector{detail::lagrange_weights_unchecked(x.x)};
}

/// g(x) = (1/n) prod x_i - sum a_i ln(1+x_i) on the valid domain.
/// Strictly positive for strictly positive coordinates; zero iff some
/// coordinate is zero. Falls back to the integral representation when the
/// direct formula cannot resolve the sign.
inline double inequality_gap(const XVector& x) {
    if (!x.in_valid_domain())
        throw DomainViolation("inequality_gap: coordinates must be non-negative");
    const std::vector<double> a = detail::lagrange_weights_unchecked(x.x);
    const double rhs = detail::rhs_exponent(x.x);
    detail::KahanSum lhs;
    for (int i = 0; i < x.n(); ++i) lhs.add(a[i] * std::log1p(x.x[i]));
    const double g = rhs - lhs.value();
    const double eta = detail::gap_noise_bound(x.x, a, rhs);
    if (std::fabs(g) > eta) return g;
    return detail::stable_gap(x.x);
}

struct Sides {
    double lhs = 0.0;
    double rhs = 0.0;
};

/// Both sides of the generalized inequality as real numbers. Negative bases
/// are admitted only with integer exponents (exact real power); zero bases
/// with non-positive exponents are rejected.
inline Sides evaluate_sides(std::span<const double> x) {
    detail::require_separated(x, "evaluate_sides");
    const std::vector<double> a = detail::lagrange_weights_unchecked(x);
    const auto integ = detail::weight_integrality(x, a);

    detail::ScaledProduct lhs;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double base = 1.0 + x[i];
        if (base == 0.0) {
            if (a[i] > 0.0)
                lhs.mul(0.0); // 0^{a>0} = 0
            else
                throw IllDefinedZeroPowError("evaluate_sides: 0 raised to a "
                                             "non-positive weight");
        } else if (base > 0.0) {
            if (integ[i].is_integer)
                lhs.mul(detail::signed_int_pow(
                    base, static_cast<std::int64_t>(std::nearbyint(a[i]))));
            else
                lhs.mul(std::pow(base, a[i]));
        } else {
            if (!integ[i].is_integer)
                throw UndefinedBaseError("evaluate_sides: negative base 1+x_i "
                                         "with non-integer weight");
            lhs.mul(detail::signed_int_pow(
                base, static_cast<std::int64_t>(std::nearbyint(a[i]))));
        }
    }
    return Sides{lhs.value(), std::exp(detail::rhs_exponent(x))};
}

/// Full classification record for one extended-domain point.
struct PointAnalysis {
    PointClass tag = PointClass::Holds;
    /// rhs_exponent - lhs_exponent when the left side is positive;
    /// +inf when lhs <= 0 < rhs; NaN when the point is not evaluable.
    double gap = std::numeric_limits<double>::quiet_NaN();
    double lhs_exponent = std::numeric_limits<double>::quiet_NaN();
    double rhs_exponent = std::numeric_limits<double>::quiet_NaN();
    int lhs_sign = 1;
};

/// Total classification of any real sequence against the inequality's
/// extended-domain taxonomy.
inline PointAnalysis analyze_extended_point(std::span<const double> x) {
    PointAnalysis r;
    if (x.empty() || !detail::pairwise_separated(x)) {
        r.tag = PointClass::DivisionByZeroWeight;
        return r;
    }
    const std::vector<double> a = detail::lagrange_weights_unchecked(x);
    const auto integ = detail::weight_integrality(x, a);

    int sign = 1;
    bool zero_base_positive_weight = false;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double base = 1.0 + x[i];
        if (base < 0.0) {
            if (!integ[i].is_integer) {
                r.tag = PointClass::UndefinedBase;
                return r;
            }
            if (integ[i].is_odd) sign = -sign;
        } else if (base == 0.0) {
            // 0^0 and 0^{a<0} are not real numbers; 0^{a>0} = 0.
            if (a[i] <= 0.0) {
                r.tag = PointClass::IllDefinedZeroPow;
                return r;
            }
            zero_base_positive_weight = true;
        }
    }

    r.rhs_exponent = detail::rhs_exponent(x);
    if (zero_base_positive_weight) {
        r.lhs_sign = 0;
        r.lhs_exponent = -std::numeric_limits<double>::infinity();
        r.gap = std::numeric_limits<double>::infinity();
        r.tag = PointClass::Holds; // lhs = 0 < e^{rhs}
        return r;
    }

    detail::KahanSum lhs;
    for (std::size_t i = 0; i < x.size(); ++i)
        lhs.add(a[i] * std::log(std::fabs(1.0 + x[i])));
    r.lhs_exponent = lhs.value();
    r.lhs_sign = sign;

    if (sign < 0) {
        r.gap = std::numeric_limits<double>::infinity();
        r.tag = PointClass::Holds; // lhs < 0 < rhs
        return r;
    }

    double g = r.rhs_exponent - r.lhs_exponent;
    const double eta = detail::gap_noise_bound(x, a, r.rhs_exponent);
    const double scale =
        std::max(std::fabs(r.lhs_exponent), std::fabs(r.rhs_exponent));
    if (std::fabs(g) <= std::max(eta, kEqTol * scale)) {
        // Too close to call directly; resolve through the integral
        // representation when it applies (all bases positive).
        bool all_above = true;
        for (double v : x) all_above = all_above && (v > -1.0);
        if (all_above) {
            try {
                g = detail::stable_gap(x);
            } catch (const QuadratureFailure&) {
                // keep the direct value
            }
        }
    }
    r.gap = g;
    if (std::fabs(g) <= kEqTol * scale)
        r.tag = PointClass::Equality;
    else
        r.tag = (g > 0.0) ? PointClass::Holds : PointClass::Fails;
    return r;
}

inline PointClass classify_extended_point(std::span<const double> x) {
    return analyze_extended_point(x).tag;
}

/// Point with repetition counts: coordinate x_i enters through the expanded
/// node multiset { j*x_i : 1 <= j <= r_i }.
struct RepetitionSpec {
    std::vector<double> x;
    std::vector<int> r;

    RepetitionSpec(std::vector<double> coords, std::vector<int> reps)
        : x(std::move(coords)), r(std::move(reps)) {
        if (x.empty() || x.size() != r.size())
            throw DomainViolation("RepetitionSpec: x and r must match and be non-empty");
        for (int c : r)
            if (c < 1) throw DomainViolation("RepetitionSpec: repetition counts must be >= 1");
        for (double v : x)
            if (v < 0.0) throw DomainViolation("RepetitionSpec: coordinates must be non-negative");
        detail::require_separated(expanded(), "RepetitionSpec expanded multiset");
    }

    int n() const { return static_cast<int>(x.size()); }
    int m() const { return std::accumulate(r.begin(), r.end(), 0); }

    /// The expanded node multiset { j * x_i }, in (i, j) order.
    std::vector<double> expanded() const {
        std::vector<double> out;
        for (std::size_t i = 0; i < x.size(); ++i)
            for (int j = 1; j <= r[i]; ++j)
                out.push_back(static_cast<double>(j) * x[i]);
        return out;
    }
};

/// Weights a_ij of the repetition inequality; row i holds j = 1..r_i.
/// Collapses to lagrange_weights when every r_i = 1.
inline std::vector<std::vector<double>> repetition_weights(const RepetitionSpec& spec) {
    const int n = spec.n();
    std::vector<std::vector<double>> a(n);
    for (int i = 0; i < n; ++i) {
        a[i].resize(spec.r[i]);
        for (int j = 1; j <= spec.r[i]; ++j) {
            detail::ScaledProduct num, den;
            for (int l = 1; l <= spec.r[i]; ++l) {
                if (l == j) continue;
                num.mul(static_cast<double>(l));
                den.mul(static_cast<double>(l - j));
            }
            for (int k = 0; k < n; ++k) {
                if (k == i) continue;
                for (int l = 1; l <= spec.r[k]; ++l) {
                    num.mul(static_cast<double>(l) * spec.x[k]);
                    den.mul(static_cast<double>(l) * spec.x[k] -
                            static_cast<double>(j) * spec.x[i]);
                }
            }
            a[i][j - 1] = detail::ScaledProduct::ratio(num, den);
        }
    }
    return a;
}

/// (1/m) prod r_i! x_i^{r_i} - sum_{i,j} a_ij ln(1 + j x_i). Equals
/// inequality_gap on the expanded node multiset.
inline double repetition_gap(const RepetitionSpec& spec) {
    const auto a = repetition_weights(spec);
    detail::ScaledProduct p;
    for (int i = 0; i < spec.n(); ++i)
        for (int l = 1; l <= spec.r[i]; ++l) p.mul(static_cast<double>(l) * spec.x[i]);
    const double rhs = p.value() / static_cast<double>(spec.m());
    detail::KahanSum lhs;
    for (int i = 0; i < spec.n(); ++i)
        for (int j = 1; j <= spec.r[i]; ++j)
            lhs.add(a[i][j - 1] * std::log1p(static_cast<double>(j) * spec.x[i]));
    const double g = rhs - lhs.value();
    // same refinement as inequality_gap, on the expanded nodes
    const auto nodes = spec.expanded();
    const auto aw = detail::lagrange_weights_unchecked(nodes);
    if (std::fabs(g) > detail::gap_noise_bound(nodes, aw, rhs)) return g;
    return detail::stable_gap(nodes);
}

} // namespace blowuplab
