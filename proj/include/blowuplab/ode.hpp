#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "blowuplab/errors.hpp"
#include "blowuplab/numeric.hpp"
#include "blowuplab/partial_fractions.hpp"
#include "blowuplab/quadrature.hpp"

namespace blowuplab {

/// dy/dt = f(y), y(0) = y0, with f the generalized logistic right-hand side.
struct CauchyProblem {
    KVector k;
    double y0 = 0.0;

    CauchyProblem(KVector capacities, double initial)
        : k(std::move(capacities)), y0(initial) {}
};

/// f(y) = (-1)^{n+1} y prod_i (1 - y/k_i).
inline double rhs(double y, const KVector& k) {
    detail::ScaledProduct p;
    p.mul(y);
    for (double v : k.k) p.mul(1.0 - y / v);
    double out = p.value();
    if (k.n() % 2 == 0) out = -out;
    return out;
}

enum class BlowupDirection { None, Past, Future };

inline const char* to_string(BlowupDirection d) {
    switch (d) {
        case BlowupDirection::None: return "None";
        case BlowupDirection::Past: return "Past";
        case BlowupDirection::Future: return "Future";
    }
    return "?";
}

enum class FateTag {
    EquilibriumExact,
    GlobalBothDirections,
    PositivelyGlobal_PastBlowup,
    NegativelyGlobal_FutureBlowup,
    PositivelyGlobal_PastBlowup_NegativeBranch,
};

inline const char* to_string(FateTag t) {
    switch (t) {
        case FateTag::EquilibriumExact: return "EquilibriumExact";
        case FateTag::GlobalBothDirections: return "GlobalBothDirections";
        case FateTag::PositivelyGlobal_PastBlowup: return "PositivelyGlobal_PastBlowup";
        case FateTag::NegativelyGlobal_FutureBlowup:
            return "NegativelyGlobal_FutureBlowup";
        case FateTag::PositivelyGlobal_PastBlowup_NegativeBranch:
            return "PositivelyGlobal_PastBlowup_NegativeBranch";
    }
    return "?";
}

struct QualitativeFate {
    FateTag tag = FateTag::GlobalBothDirections;
    BlowupDirection blowup_direction = BlowupDirection::None;
};

/// Phase-line case table: blow-up happens iff y0 < 0 or y0 > k_n, with the
/// direction set by the parity of n on the negative branch.
inline QualitativeFate classify_initial(const CauchyProblem& p) {
    if (p.y0 == 0.0) return {FateTag::EquilibriumExact, BlowupDirection::None};
    for (double v : p.k.k)
        if (p.y0 == v) return {FateTag::EquilibriumExact, BlowupDirection::None};
    if (p.y0 < 0.0) {
        if (p.k.n() % 2 != 0)
            return {FateTag::NegativelyGlobal_FutureBlowup, BlowupDirection::Future};
        return {FateTag::PositivelyGlobal_PastBlowup_NegativeBranch,
                BlowupDirection::Past};
    }
    if (p.y0 > p.k.max())
        return {FateTag::PositivelyGlobal_PastBlowup, BlowupDirection::Past};
    return {FateTag::GlobalBothDirections, BlowupDirection::None};
}

/// A-priori upper bound on the blow-up time:
///   y0 < 0:   prod k_i / (n (-y0)^n)
///   y0 > k_n: prod k_i / (n y0^n prod(1 - k_i/y0)).
inline double blowup_time_bound(const CauchyProblem& p) {
    const int n = p.k.n();
    detail::ScaledProduct num, den;
    for (double v : p.k.k) num.mul(v);
    den.mul(static_cast<double>(n));
    if (p.y0 < 0.0) {
        for (int i = 0; i < n; ++i) den.mul(-p.y0);
    } else if (p.y0 > p.k.max()) {
        for (int i = 0; i < n; ++i) den.mul(p.y0);
        for (double v : p.k.k) den.mul(1.0 - v / p.y0);
    } else {
        throw DomainViolation("blowup_time_bound: no blow-up for y0 in [0, k_n]");
    }
    return detail::ScaledProduct::ratio(num, den);
}

struct BlowupReport {
    BlowupDirection direction = BlowupDirection::None;
    double analytic_time = 0.0;
    double bound = 0.0;
    std::optional<double> numeric_time;
    std::optional<double> residual; // |numeric - analytic| / analytic
};

/// Closed-form blow-up time through the partial-fraction residues:
///   y0 < 0:   -sum A_i ln(1 + k_i/(-y0))
///   y0 > k_n: -sum B_i ln(1 - k_i/y0).
inline BlowupReport analytic_blowup_time(const CauchyProblem& p) {
    BlowupReport r;
    if (p.y0 < 0.0) {
        const Decomposition d = decompose_negative_side(p.k);
        detail::KahanSum s;
        for (int i = 0; i < p.k.n(); ++i)
            s.add(d.residues[i] * std::log1p(p.k.k[i] / (-p.y0)));
        r.analytic_time = -s.value();
        r.direction = (p.k.n() % 2 != 0) ? BlowupDirection::Future
                                         : BlowupDirection::Past;
    } else if (p.y0 > p.k.max()) {
        const Decomposition d = decompose_positive_side(p.k);
        detail::KahanSum s;
        for (int i = 0; i < p.k.n(); ++i)
            s.add(d.residues[i] * std::log1p(-p.k.k[i] / p.y0));
        r.analytic_time = -s.value();
        r.direction = BlowupDirection::Past;
    } else {
        throw DomainViolation("analytic_blowup_time: no blow-up for y0 in [0, k_n]");
    }
    r.bound = blowup_time_bound(p);
    return r;
}

/// Independent oracle: the blow-up time as the improper integral of 1/|f|,
/// transformed to a finite interval (u = y0/x on the negative branch,
/// x = y0 + u/(1-u) on the positive one) and integrated adaptively.
inline double blowup_time_quadrature(const CauchyProblem& p) {
    if (p.y0 < 0.0) {
        auto integrand = [&](double u) {
            const double x = p.y0 / u;
            detail::ScaledProduct num, den;
            for (double v : p.k.k) num.mul(v);
            num.mul(-p.y0);
            den.mul(-x);
            for (double v : p.k.k) den.mul(v - x);
            den.mul(u);
            den.mul(u);
            return detail::ScaledProduct::ratio(num, den);
        };
        return integrate_adaptive(integrand, 0.0, 1.0, 1e-300, 1e-13, 4000).value;
    }
    if (p.y0 > p.k.max()) {
        auto integrand = [&](double u) {
            const double x = p.y0 + u / (1.0 - u);
            detail::ScaledProduct num, den;
            for (double v : p.k.k) num.mul(v);
            den.mul(x);
            for (double v : p.k.k) den.mul(x - v);
            den.mul(1.0 - u);
            den.mul(1.0 - u);
            return detail::ScaledProduct::ratio(num, den);
        };
        return integrate_adaptive(integrand, 0.0, 1.0, 1e-300, 1e-13, 4000).value;
    }
    throw DomainViolation("blowup_time_quadrature: no blow-up for y0 in [0, k_n]");
}

enum class TimeDirection { Forward, Backward };
enum class TerminalStatus { ReachedHorizon, Escaped, StiffFailure };

inline const char* to_string(TerminalStatus s) {
    switch (s) {
        case TerminalStatus::ReachedHorizon: return "ReachedHorizon";
        case TerminalStatus::Escaped: return "Escaped";
        case TerminalStatus::StiffFailure: return "StiffFailure";
    }
    return "?";
}

struct TrajectorySample {
    double t = 0.0;
    double y = 0.0;
};

struct Trajectory {
    std::vector<TrajectorySample> samples;
    TerminalStatus terminal_status = TerminalStatus::ReachedHorizon;
    double escape_threshold = 0.0;
};

struct IntegratorOptions {
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;
    /// When > 0, reject any step with |dy| > growth_cap * |y|; keeps the
    /// escape-time estimate stable on blow-up branches.
    double growth_cap = 0.0;
    double escape_factor = 1e9;
    long max_steps = 2000000;
    /// h_max = horizon / min_samples.
    int min_samples = 64;
};

namespace detail {

// Dormand-Prince 5(4) coefficients.
struct Dopri5Step {
    double y5 = 0.0;
    double err = 0.0;
};

template <class F>
Dopri5Step dopri5(F&& f, double y, double h) {
    constexpr double a21 = 1.0 / 5;
    constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                     a53 = 64448.0 / 6561, a54 = -212.0 / 729;
    constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33,
                     a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                     a65 = -5103.0 / 18656;
    constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                     b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    constexpr double e1 = 5179.0 / 57600, e3 = 7571.0 / 16695, e4 = 393.0 / 640,
                     e5 = -92097.0 / 339200, e6 = 187.0 / 2100, e7 = 1.0 / 40;

    const double k1 = f(y);
    const double k2 = f(y + h * a21 * k1);
    const double k3 = f(y + h * (a31 * k1 + a32 * k2));
    const double k4 = f(y + h * (a41 * k1 + a42 * k2 + a43 * k3));
    const double k5 = f(y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
    const double k6 = f(y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
    const double y5 = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
    const double k7 = f(y5);
    const double y4 = y + h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
    return {y5, std::fabs(y5 - y4)};
}

} // namespace detail

/// Adaptive embedded Runge-Kutta integration of the Cauchy problem until
/// the horizon, the escape threshold, or step-size collapse. Backward runs
/// integrate the time-reversed field and report negative times.
inline Trajectory integrate(const CauchyProblem& p, TimeDirection direction,
                            double horizon, const IntegratorOptions& opts = {}) {
    if (!(horizon > 0.0)) throw DomainViolation("integrate: horizon must be positive");
    const double sgn = (direction == TimeDirection::Forward) ? 1.0 : -1.0;
    auto f = [&](double y) { return sgn * rhs(y, p.k); };

    const double escape =
        opts.escape_factor * std::max({1.0, p.k.max(), std::fabs(p.y0)});
    const double h_max = horizon / static_cast<double>(std::max(opts.min_samples, 2));

    Trajectory traj;
    traj.escape_threshold = escape;
    double t = 0.0, y = p.y0;
    traj.samples.push_back({0.0, y});

    // first-step heuristic
    const double f0 = std::fabs(f(y));
    double h = (f0 > 0.0)
                   ? std::min({0.01 * (std::fabs(y) + opts.abs_tol) / f0, h_max, horizon})
                   : h_max;

    traj.terminal_status = TerminalStatus::StiffFailure; // until proven otherwise
    for (long step = 0; step < opts.max_steps; ++step) {
        if (t >= horizon) {
            traj.terminal_status = TerminalStatus::ReachedHorizon;
            break;
        }
        h = std::min(h, horizon - t);
        const auto s = detail::dopri5(f, y, h);
        const double tol = opts.abs_tol +
                           opts.rel_tol * std::max(std::fabs(y), std::fabs(s.y5));
        const double ratio = s.err / tol;
        const bool growth_ok =
            opts.growth_cap <= 0.0 ||
            std::fabs(s.y5 - y) <= opts.growth_cap * std::max(std::fabs(y), 1e-300);
        if (ratio <= 1.0 && growth_ok) {
            t += h;
            y = s.y5;
            traj.samples.push_back({sgn * t, y});
            if (std::fabs(y) >= escape) {
                traj.terminal_status = TerminalStatus::Escaped;
                break;
            }
            if (t >= horizon) {
                traj.terminal_status = TerminalStatus::ReachedHorizon;
                break;
            }
            const double grow =
                std::clamp(0.9 * std::pow(std::max(ratio, 1e-10), -0.2), 1.0, 5.0);
            h = std::min(h * grow, h_max);
        } else {
            const double shrink =
                growth_ok ? std::clamp(0.9 * std::pow(ratio, -0.2), 0.1, 0.9) : 0.5;
            h *= shrink;
            if (h < 1e-290) break; // stiffness: step size underflow
        }
    }
    return traj;
}

/// Escape-time estimate plus the analytic tail of the blow-up integral:
/// t_escape + prod k_i / (n |y_escape|^n). Agrees with the closed form to
/// 1e-3 relative with default options.
inline double numeric_blowup_time(const CauchyProblem& p,
                                  IntegratorOptions opts = {}) {
    const QualitativeFate fate = classify_initial(p);
    if (fate.blowup_direction == BlowupDirection::None)
        throw DomainViolation("numeric_blowup_time: no blow-up direction");
    if (opts.growth_cap <= 0.0) opts.growth_cap = 0.1;

    const TimeDirection dir = (fate.blowup_direction == BlowupDirection::Future)
                                  ? TimeDirection::Forward
                                  : TimeDirection::Backward;
    const double horizon = 2.0 * blowup_time_bound(p);
    const Trajectory traj = integrate(p, dir, horizon, opts);
    if (traj.terminal_status != TerminalStatus::Escaped)
        throw StiffFailure(std::string("numeric_blowup_time: integration ended with ") +
                           to_string(traj.terminal_status) +
                           " before reaching the escape threshold");

    const TrajectorySample last = traj.samples.back();
    detail::ScaledProduct num, den;
    for (double v : p.k.k) num.mul(v);
    den.mul(static_cast<double>(p.k.n()));
    for (int i = 0; i < p.k.n(); ++i) den.mul(std::fabs(last.y));
    const double tail = detail::ScaledProduct::ratio(num, den);
    return std::fabs(last.t) + tail;
}

/// Convenience: closed form, bound, numeric estimate, and residual in one go.
inline BlowupReport full_blowup_report(const CauchyProblem& p,
                                       const IntegratorOptions& opts = {}) {
    BlowupReport r = analytic_blowup_time(p);
    const double num = numeric_blowup_time(p, opts);
    r.numeric_time = num;
    r.residual = std::fabs(num - r.analytic_time) / r.analytic_time;
    return r;
}

} // namespace blowuplab
