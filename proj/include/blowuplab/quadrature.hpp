#pragma once

#include <algorithm>
#include <cmath>
#include <queue>
#include <vector>

#include "blowuplab/errors.hpp"

namespace blowuplab {

struct QuadratureResult {
    double value = 0.0;
    double error_estimate = 0.0;
    int panels = 0;
};

namespace detail {

// 15-point Kronrod extension of the 7-point Gauss rule (positive abscissae;
// the rule is symmetric). Exact through degree 22.
inline constexpr double kGK15Node[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
};
inline constexpr double kGK15WeightK[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
};
// Gauss-7 weights, matched to the odd-index Kronrod nodes and the centre.
inline constexpr double kGK15WeightG[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
};

template <class F>
void gk15_panel(F&& f, double a, double b, double& value, double& err) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    double fv[15];
    for (int i = 0; i < 7; ++i) {
        fv[i] = f(c - h * kGK15Node[i]);
        fv[14 - i] = f(c + h * kGK15Node[i]);
    }
    fv[7] = f(c);
    double kron = kGK15WeightK[7] * fv[7];
    double gauss = kGK15WeightG[3] * fv[7];
    for (int i = 0; i < 7; ++i) {
        kron += kGK15WeightK[i] * (fv[i] + fv[14 - i]);
        if (i % 2 == 1) gauss += kGK15WeightG[i / 2] * (fv[i] + fv[14 - i]);
    }
    value = kron * h;
    // standard QUADPACK-style rescaled error estimate
    const double diff = std::fabs((kron - gauss) * h);
    double resabs = 0.0;
    for (int i = 0; i < 7; ++i)
        resabs += kGK15WeightK[i] * (std::fabs(fv[i]) + std::fabs(fv[14 - i]));
    resabs += kGK15WeightK[7] * std::fabs(fv[7]);
    resabs *= std::fabs(h);
    err = diff;
    if (resabs > 0.0 && diff > 0.0) {
        const double scaled = std::pow(200.0 * diff / resabs, 1.5) * resabs;
        err = std::min(diff, scaled);
    }
}

struct Panel {
    double err;
    double a, b;
    double value;
    bool operator<(const Panel& o) const { return err < o.err; }
};

} // namespace detail

/// Globally adaptive Gauss-Kronrod integration of f over the finite
/// interval [a, b]. Bisects the worst panel until the summed error estimate
/// drops below max(abs_tol, rel_tol * |integral|); throws QuadratureFailure
/// once max_panels panels are in play without convergence.
template <class F>
QuadratureResult integrate_adaptive(F&& f, double a, double b, double abs_tol,
                                    double rel_tol = 0.0, int max_panels = 2000) {
    std::priority_queue<detail::Panel> panels;
    double value, err;
    detail::gk15_panel(f, a, b, value, err);
    panels.push({err, a, b, value});
    double total_value = value;
    double total_err = err;
    int n_panels = 1;

    auto tol = [&] { return std::max(abs_tol, rel_tol * std::fabs(total_value)); };

    while (total_err > tol()) {
        if (n_panels >= max_panels) {
            throw QuadratureFailure("adaptive quadrature: panel budget exhausted "
                                    "before reaching tolerance");
        }
        detail::Panel worst = panels.top();
        if (worst.err <= 0.0) break; // nothing left to refine
        panels.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (mid <= worst.a || mid >= worst.b) {
            // interval no longer splittable in doubles; accept as-is
            panels.push({0.0, worst.a, worst.b, worst.value});
            total_err -= worst.err;
            continue;
        }
        double v1, e1, v2, e2;
        detail::gk15_panel(f, worst.a, mid, v1, e1);
        detail::gk15_panel(f, mid, worst.b, v2, e2);
        total_value += (v1 + v2) - worst.value;
        total_err += (e1 + e2) - worst.err;
        panels.push({e1, worst.a, mid, v1});
        panels.push({e2, mid, worst.b, v2});
        ++n_panels;
    }
    return {total_value, total_err, n_panels};
}

} // namespace blowuplab
