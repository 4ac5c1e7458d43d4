#pragma once

#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "blowuplab/errors.hpp"
#include "blowuplab/numeric.hpp"

namespace blowuplab {

/// Carrying capacities 0 < k_1 < ... < k_n, relatively separated.
struct KVector {
    std::vector<double> k;

    explicit KVector(std::vector<double> values) : k(std::move(values)) {
        if (k.empty()) throw DomainViolation("KVector: needs at least one entry");
        double scale = 1.0;
        for (double v : k) {
            if (!(v > 0.0)) throw DomainViolation("KVector: entries must be positive");
            scale = std::max(scale, v);
        }
        for (std::size_t i = 1; i < k.size(); ++i) {
            if (!(k[i] > k[i - 1]))
                throw DomainViolation("KVector: entries must be strictly ascending");
            if (k[i] - k[i - 1] < kSepTol * scale)
                throw SeparationViolation("KVector: entries closer than the "
                                          "relative separation floor");
        }
    }

    int n() const { return static_cast<int>(k.size()); }
    double max() const { return k.back(); }

    double product() const {
        detail::ScaledProduct p;
        for (double v : k) p.mul(v);
        return p.value();
    }
};

/// Which side of the pole set the rational function lives on.
enum class Side { Negative, Positive };

/// Partial-fraction coefficients of prod k_i / (-x prod(k_i - x)) on the
/// negative side (leading A, residues A_i) or of prod k_i / (x prod(x - k_i))
/// on the positive side (leading B, residues B_i).
struct Decomposition {
    Side side = Side::Negative;
    double leading = 1.0;
    std::vector<double> residues;

    double residue_sum() const {
        detail::KahanSum s;
        for (double v : residues) s.add(v);
        return s.value();
    }
};

/// A = 1, A_i = -prod_{j!=i} k_j / prod_{j!=i} (k_j - k_i). Sum A_i = -1.
inline Decomposition decompose_negative_side(const KVector& k) {
    Decomposition d;
    d.side = Side::Negative;
    d.leading = 1.0;
    const int n = k.n();
    d.residues.resize(n);
    for (int i = 0; i < n; ++i) {
        detail::ScaledProduct num, den;
        for (int j = 0; j < n; ++j) {
            if (j == i) continue;
            num.mul(k.k[j]);
            den.mul(k.k[j] - k.k[i]);
        }
        d.residues[i] = -detail::ScaledProduct::ratio(num, den);
    }
    return d;
}

/// B = (-1)^n, B_i = (-1)^n A_i. Sum B_i = (-1)^{n+1}.
inline Decomposition decompose_positive_side(const KVector& k) {
    Decomposition d = decompose_negative_side(k);
    d.side = Side::Positive;
    const bool odd = (k.n() % 2) != 0;
    d.leading = odd ? -1.0 : 1.0;
    if (!odd) return d;
    for (double& r : d.residues) r = -r;
    return d;
}

/// Direct product evaluation of the rational function on the given side.
inline double evaluate_rational(const KVector& k, double x, Side side) {
    if (side == Side::Negative) {
        if (!(x < 0.0))
            throw PoleViolation("evaluate_rational: negative side needs x < 0");
        detail::ScaledProduct den;
        den.mul(-x);
        for (double v : k.k) den.mul(v - x);
        detail::ScaledProduct num;
        for (double v : k.k) num.mul(v);
        return detail::ScaledProduct::ratio(num, den);
    }
    if (!(x > k.max()))
        throw PoleViolation("evaluate_rational: positive side needs x > k_n");
    detail::ScaledProduct den;
    den.mul(x);
    for (double v : k.k) den.mul(x - v);
    detail::ScaledProduct num;
    for (double v : k.k) num.mul(v);
    return detail::ScaledProduct::ratio(num, den);
}

/// Sum-of-residues evaluation; agrees with evaluate_rational away from the
/// poles to full double precision for well-separated k.
inline double evaluate_decomposition(const Decomposition& d, const KVector& k,
                                     double x) {
    detail::KahanSum s;
    if (d.side == Side::Negative) {
        if (!(x < 0.0))
            throw PoleViolation("evaluate_decomposition: negative side needs x < 0");
        s.add(d.leading / (-x));
        for (int i = 0; i < k.n(); ++i) s.add(d.residues[i] / (k.k[i] - x));
    } else {
        if (!(x > k.max()))
            throw PoleViolation("evaluate_decomposition: positive side needs x > k_n");
        s.add(d.leading / x);
        for (int i = 0; i < k.n(); ++i) s.add(d.residues[i] / (x - k.k[i]));
    }
    return s.value();
}

} // namespace blowuplab
