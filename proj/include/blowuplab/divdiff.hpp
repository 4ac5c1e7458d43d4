#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include "blowuplab/errors.hpp"
#include "blowuplab/numeric.hpp"
#include "blowuplab/quadrature.hpp"

namespace blowuplab {

/// Highest derivative order supported by cm_derivative.
inline constexpr int kMaxDerivativeOrder = 12;

/// Pairwise distinct strictly positive nodes.
struct NodeSet {
    std::vector<double> x;

    explicit NodeSet(std::vector<double> nodes) : x(std::move(nodes)) {
        if (x.empty()) throw DomainViolation("NodeSet: needs at least one node");
        for (double v : x)
            if (!(v > 0.0)) throw DomainViolation("NodeSet: nodes must be positive");
        detail::require_separated(x, "NodeSet");
    }

    int n() const { return static_cast<int>(x.size()); }
    double min() const { return *std::min_element(x.begin(), x.end()); }
    double max() const { return *std::max_element(x.begin(), x.end()); }
};

namespace detail {

/// ln(1+x)/x via the alternating series; used near zero where the direct
/// quotient degenerates to 0/0.
inline double log1p_over_x_series(double x) {
    // 1 - x/2 + x^2/3 - ... + x^8/9
    double acc = 1.0 / 9.0;
    for (int m = 8; m >= 1; --m) acc = 1.0 / static_cast<double>(m) - x * acc;
    return acc;
}

inline double f_log1p_over_x_impl(double x) {
    if (std::fabs(x) < 1e-4) return log1p_over_x_series(x);
    return std::log1p(x) / x;
}

} // namespace detail

/// f(x) = ln(1+x)/x with f(0) = 1; strictly completely monotone on (0, inf).
inline double f_log1p_over_x(double x) {
    if (x < 0.0)
        throw DomainViolation("f_log1p_over_x: x must be non-negative");
    return detail::f_log1p_over_x_impl(x);
}

/// Same function continued to (-1, 0); used by the extended-domain explorer.
inline double f_log1p_over_x_extended(double x) {
    if (x <= -1.0)
        throw DomainViolation("f_log1p_over_x_extended: x must exceed -1");
    return detail::f_log1p_over_x_impl(x);
}

/// [x_1,...,x_n; f] by the Newton recurrence tableau.
template <class F>
double divided_difference(const NodeSet& nodes, F&& f) {
    const int n = nodes.n();
    std::vector<double> d(n);
    for (int i = 0; i < n; ++i) d[i] = f(nodes.x[i]);
    for (int level = 1; level < n; ++level)
        for (int i = 0; i + level < n; ++i)
            d[i] = (d[i + 1] - d[i]) / (nodes.x[i + level] - nodes.x[i]);
    return d[0];
}

/// (-1)^order * f^(order)(x) = order! * int_0^1 t^order / (1+tx)^{order+1} dt,
/// by adaptive quadrature. Strictly positive and strictly decreasing in x.
inline double cm_derivative(int order, double x) {
    if (order < 0 || order > kMaxDerivativeOrder)
        throw DomainViolation("cm_derivative: order out of range");
    if (!(x > 0.0))
        throw DomainViolation("cm_derivative: x must be positive");
    auto integrand = [order, x](double t) {
        double tn = 1.0;
        for (int i = 0; i < order; ++i) tn *= t;
        double den = 1.0 + t * x;
        double dp = den;
        for (int i = 0; i < order; ++i) dp *= den;
        return tn / dp;
    };
    // 1e-12 absolute, with a relative floor where the factorial scale makes
    // that many absolute digits unrepresentable in doubles
    double fact = 1.0;
    for (int i = 2; i <= order; ++i) fact *= static_cast<double>(i);
    const QuadratureResult q = integrate_adaptive(
        integrand, 0.0, 1.0, 1e-12 / std::max(fact, 1.0), 1e-14, 2000);
    return fact * q.value;
}

/// lim_{x->0+} (-1)^order f^(order)(x) = order!/(order+1), exactly.
inline double cm_limit_at_zero(int order) {
    if (order < 0 || order > kMaxDerivativeOrder)
        throw DomainViolation("cm_limit_at_zero: order out of range");
    double fact = 1.0;
    for (int i = 2; i <= order; ++i) fact *= static_cast<double>(i);
    return fact / static_cast<double>(order + 1);
}

struct MeanValueBound {
    double value = 0.0; // sum f(x_i) / prod_{j!=i} (x_j - x_i)
    double bound = 0.0; // 1/n
};

/// The strict mean-value bound: 0 < sum f(x_i)/prod_{j!=i}(x_j - x_i) < 1/n
/// for pairwise distinct positive nodes, with f = ln(1+x)/x. The sum equals
/// (-1)^{n-1} [x_1..x_n; f]; it is evaluated through the Newton tableau.
inline MeanValueBound mean_value_bound_check(const NodeSet& nodes) {
    const int n = nodes.n();
    const double dd = divided_difference(nodes, [](double t) {
        return detail::f_log1p_over_x_impl(t);
    });
    MeanValueBound r;
    r.value = (n % 2 == 0) ? -dd : dd;
    r.bound = 1.0 / static_cast<double>(n);
    return r;
}

} // namespace blowuplab
