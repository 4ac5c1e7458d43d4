#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <thread>
#include <vector>

#include "blowuplab/divdiff.hpp"
#include "blowuplab/errors.hpp"
#include "blowuplab/numeric.hpp"
#include "blowuplab/ode.hpp"
#include "blowuplab/rng.hpp"
#include "blowuplab/weights.hpp"

namespace blowuplab {

struct SuiteConfig {
    int n_min = 1;
    int n_max = 6;
    long samples = 1000; ///< per dimension n (or total cases for case suites)
    std::uint64_t seed = 0;
    double x_max = 10.0;
    bool include_equality_cases = false;
    bool include_extended_domain = false;
    int workers = 1;
};

struct FailureRecord {
    long index = 0; ///< deterministic global sample index
    std::vector<double> x;
    double gap = 0.0;
};

struct VerificationReport {
    long total = 0;
    long holds = 0;
    long equalities = 0;
    std::vector<FailureRecord> failures;
    long undefined = 0;
    long ill_defined = 0;
    double min_gap = std::numeric_limits<double>::infinity();
    std::uint64_t seed = 0;
};

namespace detail {

/// Per-sample substream key; n and kind are folded in so every constructed
/// point family draws from its own independent stream.
inline std::uint64_t sample_key(std::uint64_t seed, int n, int kind, long index) {
    const std::uint64_t packed = (static_cast<std::uint64_t>(n) << 56) ^
                                 (static_cast<std::uint64_t>(kind) << 48) ^
                                 static_cast<std::uint64_t>(index);
    return substream_seed(seed, packed);
}

inline std::vector<double> draw_separated(SplitMix64& rng, int n, double x_max,
                                          bool signed_domain) {
    const double lo = 1e-6 * x_max;
    for (int attempt = 0; attempt < 1000; ++attempt) {
        std::vector<double> v(n);
        for (int i = 0; i < n; ++i) {
            v[i] = rng.log_uniform(lo, x_max);
            if (signed_domain && rng.coin()) v[i] = -v[i];
        }
        if (pairwise_separated(v)) return v;
    }
    throw SamplingExhausted("draw_separated: 1000 consecutive rejections");
}

} // namespace detail

/// Deterministic log-uniform sampling of pairwise distinct positive vectors.
inline std::vector<XVector> sample_positive_distinct(int n, long count,
                                                     std::uint64_t seed,
                                                     double x_max) {
    if (n < 1 || count < 1 || !(x_max > 0.0))
        throw DomainViolation("sample_positive_distinct: bad arguments");
    std::vector<XVector> out;
    out.reserve(static_cast<std::size_t>(count));
    for (long i = 0; i < count; ++i) {
        SplitMix64 rng(detail::sample_key(seed, n, 0, i));
        out.emplace_back(detail::draw_separated(rng, n, x_max, false));
    }
    return out;
}

namespace detail {

enum class SampleKind : int {
    Regular = 0,
    EqualityExact = 1,
    EqualityAdjacent = 2,
    PaperProbe = 3,
};

struct SampleRef {
    int n = 1;
    SampleKind kind = SampleKind::Regular;
    long index = 0; ///< index within its (n, kind) family
};

/// The paper's four extended-domain counterexample probes (n = 2).
inline const std::vector<std::vector<double>>& paper_probes() {
    static const std::vector<std::vector<double>> probes = {
        {2.0, -2.0}, {0.0, -1.0}, {1.0, -0.5}, {-0.25, -0.5}};
    return probes;
}

/// Enumerates the suite's deterministic global sample order.
inline std::vector<SampleRef> suite_plan(const SuiteConfig& cfg) {
    std::vector<SampleRef> plan;
    for (int n = cfg.n_min; n <= cfg.n_max; ++n) {
        if (cfg.include_extended_domain && n == 2) {
            for (long i = 0; i < static_cast<long>(paper_probes().size()); ++i)
                plan.push_back({n, SampleKind::PaperProbe, i});
        }
        for (long i = 0; i < cfg.samples; ++i)
            plan.push_back({n, SampleKind::Regular, i});
        if (cfg.include_equality_cases) {
            const long extra = std::max<long>(1, cfg.samples / 10);
            for (long i = 0; i < extra; ++i)
                plan.push_back({n, SampleKind::EqualityExact, i});
            for (long i = 0; i < extra; ++i)
                plan.push_back({n, SampleKind::EqualityAdjacent, i});
        }
    }
    return plan;
}

inline std::vector<double> materialize(const SuiteConfig& cfg, const SampleRef& ref) {
    if (ref.kind == SampleKind::PaperProbe)
        return paper_probes()[static_cast<std::size_t>(ref.index)];
    SplitMix64 rng(sample_key(cfg.seed, ref.n, static_cast<int>(ref.kind), ref.index));
    std::vector<double> v =
        draw_separated(rng, ref.n, cfg.x_max,
                       cfg.include_extended_domain && ref.kind == SampleKind::Regular);
    if (ref.kind == SampleKind::EqualityExact)
        v[static_cast<std::size_t>(ref.index) % v.size()] = 0.0;
    else if (ref.kind == SampleKind::EqualityAdjacent)
        v[static_cast<std::size_t>(ref.index) % v.size()] = 1e-9 * cfg.x_max;
    return v;
}

struct PartialTally {
    long holds = 0, equalities = 0, undefined = 0, ill_defined = 0;
    std::vector<FailureRecord> failures;
    double min_gap = std::numeric_limits<double>::infinity();
};

inline void tally_one(const SuiteConfig& cfg, const std::vector<SampleRef>& plan,
                      long g, PartialTally& t) {
    const std::vector<double> x = materialize(cfg, plan[static_cast<std::size_t>(g)]);
    const PointAnalysis a = analyze_extended_point(x);
    switch (a.tag) {
        case PointClass::Holds:
            ++t.holds;
            if (std::isfinite(a.gap)) t.min_gap = std::min(t.min_gap, a.gap);
            break;
        case PointClass::Equality:
            ++t.equalities;
            break;
        case PointClass::Fails:
            t.failures.push_back({g, x, a.gap});
            break;
        case PointClass::UndefinedBase:
        case PointClass::DivisionByZeroWeight:
            ++t.undefined;
            break;
        case PointClass::IllDefinedZeroPow:
            ++t.ill_defined;
            break;
    }
}

} // namespace detail

/// Classifies every sample of the configured families. On the valid domain
/// the pass condition is an empty failures list; extended-domain runs are
/// exploratory and simply record what they saw.
inline VerificationReport run_inequality_suite(const SuiteConfig& cfg) {
    if (cfg.samples < 1 || cfg.n_min < 1 || cfg.n_max < cfg.n_min)
        throw DomainViolation("run_inequality_suite: bad configuration");
    const std::vector<detail::SampleRef> plan = detail::suite_plan(cfg);
    const long total = static_cast<long>(plan.size());
    const int workers = std::max(1, cfg.workers);

    std::vector<detail::PartialTally> parts(static_cast<std::size_t>(workers));
    if (workers == 1) {
        for (long g = 0; g < total; ++g) detail::tally_one(cfg, plan, g, parts[0]);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(workers));
        for (int w = 0; w < workers; ++w) {
            pool.emplace_back([&, w] {
                const long lo = total * w / workers;
                const long hi = total * (w + 1) / workers;
                for (long g = lo; g < hi; ++g)
                    detail::tally_one(cfg, plan, g, parts[static_cast<std::size_t>(w)]);
            });
        }
        for (auto& th : pool) th.join();
    }

    VerificationReport r;
    r.total = total;
    r.seed = cfg.seed;
    for (const auto& t : parts) {
        r.holds += t.holds;
        r.equalities += t.equalities;
        r.undefined += t.undefined;
        r.ill_defined += t.ill_defined;
        r.min_gap = std::min(r.min_gap, t.min_gap);
        r.failures.insert(r.failures.end(), t.failures.begin(), t.failures.end());
    }
    std::sort(r.failures.begin(), r.failures.end(),
              [](const FailureRecord& a, const FailureRecord& b) {
                  return a.index < b.index;
              });
    return r;
}

struct BlowupSuiteSummary {
    long cases = 0;
    long violations = 0;
    double worst_bound_ratio = 0.0; ///< max analytic/bound; must stay < 1
    double worst_quadrature_residual = 0.0;
    double worst_numeric_residual = 0.0;
    std::uint64_t seed = 0;
};

/// Tolerances the blow-up cross-checks are held to.
inline constexpr double kBlowupQuadTol = 1e-8;
inline constexpr double kBlowupNumericTol = 1e-3;

/// Randomized cross-check of the closed-form blow-up times against the
/// quadrature oracle and the adaptive integrator.
inline BlowupSuiteSummary run_blowup_suite(const SuiteConfig& cfg) {
    BlowupSuiteSummary s;
    s.seed = cfg.seed;
    const int n_lo = std::max(1, cfg.n_min);
    const int n_hi = std::max(n_lo, cfg.n_max);
    for (long c = 0; c < cfg.samples; ++c) {
        SplitMix64 rng(detail::sample_key(cfg.seed, 0, 10, c));
        const int n = n_lo + static_cast<int>(rng.next() %
                                              static_cast<std::uint64_t>(n_hi - n_lo + 1));
        std::vector<double> k(static_cast<std::size_t>(n));
        for (int attempt = 0;; ++attempt) {
            for (auto& v : k) v = rng.log_uniform(0.1, 10.0);
            std::sort(k.begin(), k.end());
            // conditioning floor: residues amplify round-off near-coincident k
            bool ok = true;
            for (std::size_t i = 1; i < k.size(); ++i)
                ok = ok && (k[i] - k[i - 1] >= 1e-3 * k.back());
            if (ok) break;
            if (attempt > 1000)
                throw SamplingExhausted("run_blowup_suite: k sampling exhausted");
        }
        double y0;
        if (rng.coin())
            y0 = -rng.log_uniform(0.05, 50.0);
        else
            y0 = k.back() * (1.0 + rng.log_uniform(0.01, 10.0));

        const CauchyProblem p(KVector(k), y0);
        const BlowupReport rep = analytic_blowup_time(p);
        const double quad = blowup_time_quadrature(p);
        const double numeric = numeric_blowup_time(p);

        const double bound_ratio = rep.analytic_time / rep.bound;
        const double rq = std::fabs(quad - rep.analytic_time) / rep.analytic_time;
        const double rn = std::fabs(numeric - rep.analytic_time) / rep.analytic_time;
        s.worst_bound_ratio = std::max(s.worst_bound_ratio, bound_ratio);
        s.worst_quadrature_residual = std::max(s.worst_quadrature_residual, rq);
        s.worst_numeric_residual = std::max(s.worst_numeric_residual, rn);
        if (!(rep.analytic_time > 0.0) || !(bound_ratio < 1.0) ||
            !(rq <= kBlowupQuadTol) || !(rn <= kBlowupNumericTol))
            ++s.violations;
        ++s.cases;
    }
    return s;
}

struct CrossRouteResult {
    double residual = 0.0;   ///< |sum a_i ln(1+x_i) - (prod x) sum f/prod|
    double scaled_sum = 0.0; ///< n * sum f(x_i)/prod_{j!=i}(x_j - x_i); < 1
};

/// Ties the weight route to the divided-difference route: the weighted
/// log-sum must equal (prod x) times the f-sum, and n times the f-sum must
/// stay strictly below 1. The f-sum is evaluated by the direct formula,
/// independent of the Newton tableau.
inline CrossRouteResult cross_route_check(const XVector& x) {
    if (!x.in_valid_domain())
        throw DomainViolation("cross_route_check: coordinates must be non-negative");
    const int n = x.n();
    detail::KahanSum fsum;
    for (int i = 0; i < n; ++i) {
        detail::ScaledProduct den;
        for (int j = 0; j < n; ++j)
            if (j != i) den.mul(x.x[j] - x.x[i]);
        detail::ScaledProduct num;
        num.mul(f_log1p_over_x(x.x[i]));
        fsum.add(detail::ScaledProduct::ratio(num, den));
    }
    const std::vector<double> a = detail::lagrange_weights_unchecked(x.x);
    detail::KahanSum lhs;
    for (int i = 0; i < n; ++i) lhs.add(a[i] * std::log1p(x.x[i]));
    detail::ScaledProduct p;
    for (double v : x.x) p.mul(v);

    CrossRouteResult r;
    r.residual = std::fabs(lhs.value() - p.value() * fsum.value());
    r.scaled_sum = static_cast<double>(n) * fsum.value();
    return r;
}

struct CrossRouteSuiteSummary {
    long cases = 0;
    long violations = 0;
    double worst_residual = 0.0;
    double worst_scaled_sum = 0.0;
    std::uint64_t seed = 0;
};

inline CrossRouteSuiteSummary run_crossroute_suite(const SuiteConfig& cfg) {
    CrossRouteSuiteSummary s;
    s.seed = cfg.seed;
    for (int n = std::max(1, cfg.n_min); n <= cfg.n_max; ++n) {
        for (long i = 0; i < cfg.samples; ++i) {
            SplitMix64 rng(detail::sample_key(cfg.seed, n, 11, i));
            XVector x(detail::draw_separated(rng, n, cfg.x_max, false));
            const CrossRouteResult res = cross_route_check(x);
            s.worst_residual = std::max(s.worst_residual, res.residual);
            s.worst_scaled_sum = std::max(s.worst_scaled_sum, res.scaled_sum);
            if (!(res.residual <= kIdTol) ||
                !(res.scaled_sum < 1.0 && res.scaled_sum > 0.0))
                ++s.violations;
            ++s.cases;
        }
    }
    return s;
}

struct RepetitionSuiteSummary {
    long cases = 0;
    long violations = 0;
    double worst_reduction_deviation = 0.0; ///< all-ones a_ij vs lagrange a_i
    double worst_expansion_deviation = 0.0; ///< repetition vs expanded-node gap
    double min_gap = std::numeric_limits<double>::infinity();
    std::uint64_t seed = 0;
};

/// Exercises the repetition generalization: collapse at r = 1, agreement
/// with the expanded node multiset, and strict positivity of the gap.
inline RepetitionSuiteSummary run_repetition_suite(const SuiteConfig& cfg) {
    RepetitionSuiteSummary s;
    s.seed = cfg.seed;
    for (long c = 0; c < cfg.samples; ++c) {
        SplitMix64 rng(detail::sample_key(cfg.seed, 0, 12, c));
        const int n = 1 + static_cast<int>(rng.next() % 3);
        std::vector<int> r(static_cast<std::size_t>(n), 1);
        const bool all_ones = (c % 3 == 0);
        if (!all_ones) {
            int budget = 10 - n;
            for (auto& ri : r) {
                const int extra = static_cast<int>(rng.next() % 3);
                const int add = std::min(extra, budget);
                ri += add;
                budget -= add;
            }
        }
        std::vector<double> x;
        for (int attempt = 0;; ++attempt) {
            SplitMix64 xr(detail::sample_key(cfg.seed, n, 13, c * 1000 + attempt));
            x = detail::draw_separated(xr, n, cfg.x_max, false);
            std::vector<double> expanded;
            for (int i = 0; i < n; ++i)
                for (int j = 1; j <= r[static_cast<std::size_t>(i)]; ++j)
                    expanded.push_back(j * x[static_cast<std::size_t>(i)]);
            if (detail::pairwise_separated(expanded)) break;
            if (attempt > 1000)
                throw SamplingExhausted("run_repetition_suite: sampling exhausted");
        }

        const RepetitionSpec spec(x, r);
        bool bad = false;

        if (all_ones) {
            const auto aij = repetition_weights(spec);
            const auto aw = lagrange_weights(XVector(x));
            for (int i = 0; i < n; ++i) {
                const double dev = std::fabs(aij[static_cast<std::size_t>(i)][0] -
                                             aw.a[static_cast<std::size_t>(i)]);
                s.worst_reduction_deviation = std::max(s.worst_reduction_deviation, dev);
                bad = bad || !(dev <= 1e-12);
            }
        }

        const double rg = repetition_gap(spec);
        const double eg = inequality_gap(XVector(spec.expanded()));
        const double dev = std::fabs(rg - eg);
        s.worst_expansion_deviation = std::max(s.worst_expansion_deviation, dev);
        bad = bad || !(dev <= kIdTol);

        s.min_gap = std::min(s.min_gap, rg);
        bad = bad || !(rg > 0.0);

        if (bad) ++s.violations;
        ++s.cases;
    }
    return s;
}

} // namespace blowuplab
