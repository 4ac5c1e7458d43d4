#pragma once

#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <string>

#include <json.hpp>

#include "blowuplab/ode.hpp"
#include "blowuplab/verify.hpp"

namespace blowuplab {

inline constexpr int kSchemaVersion = 1;

namespace detail {

inline nlohmann::ordered_json json_or_null(double v) {
    if (!std::isfinite(v)) return nullptr;
    return v;
}

} // namespace detail

/// Fixed key order: total, holds, equalities, failures, undefined,
/// ill_defined, min_gap, seed, schema_version. Byte-stable for a fixed
/// seed regardless of worker count.
inline std::string report_to_json(const VerificationReport& r) {
    nlohmann::ordered_json j;
    j["total"] = r.total;
    j["holds"] = r.holds;
    j["equalities"] = r.equalities;
    nlohmann::ordered_json fails = nlohmann::ordered_json::array();
    for (const FailureRecord& f : r.failures) {
        nlohmann::ordered_json e;
        e["index"] = f.index;
        e["x"] = f.x;
        e["gap"] = detail::json_or_null(f.gap);
        fails.push_back(std::move(e));
    }
    j["failures"] = std::move(fails);
    j["undefined"] = r.undefined;
    j["ill_defined"] = r.ill_defined;
    j["min_gap"] = detail::json_or_null(r.min_gap);
    j["seed"] = r.seed;
    j["schema_version"] = kSchemaVersion;
    return j.dump(2) + "\n";
}

inline std::string blowup_report_to_json(const BlowupReport& r) {
    nlohmann::ordered_json j;
    j["direction"] = to_string(r.direction);
    j["analytic_time"] = r.analytic_time;
    j["bound"] = r.bound;
    j["numeric_time"] =
        r.numeric_time ? nlohmann::ordered_json(*r.numeric_time) : nullptr;
    j["residual"] = r.residual ? nlohmann::ordered_json(*r.residual) : nullptr;
    j["schema_version"] = kSchemaVersion;
    return j.dump(2) + "\n";
}

inline std::string blowup_suite_to_json(const BlowupSuiteSummary& s) {
    nlohmann::ordered_json j;
    j["cases"] = s.cases;
    j["violations"] = s.violations;
    j["worst_bound_ratio"] = s.worst_bound_ratio;
    j["worst_quadrature_residual"] = s.worst_quadrature_residual;
    j["worst_numeric_residual"] = s.worst_numeric_residual;
    j["seed"] = s.seed;
    j["schema_version"] = kSchemaVersion;
    return j.dump(2) + "\n";
}

inline std::string crossroute_suite_to_json(const CrossRouteSuiteSummary& s) {
    nlohmann::ordered_json j;
    j["cases"] = s.cases;
    j["violations"] = s.violations;
    j["worst_residual"] = s.worst_residual;
    j["worst_scaled_sum"] = s.worst_scaled_sum;
    j["seed"] = s.seed;
    j["schema_version"] = kSchemaVersion;
    return j.dump(2) + "\n";
}

inline std::string repetition_suite_to_json(const RepetitionSuiteSummary& s) {
    nlohmann::ordered_json j;
    j["cases"] = s.cases;
    j["violations"] = s.violations;
    j["worst_reduction_deviation"] = s.worst_reduction_deviation;
    j["worst_expansion_deviation"] = s.worst_expansion_deviation;
    j["min_gap"] = detail::json_or_null(s.min_gap);
    j["seed"] = s.seed;
    j["schema_version"] = kSchemaVersion;
    return j.dump(2) + "\n";
}

/// CSV header "t,y", 17 significant digits, '\n' line ends, no trailing
/// whitespace; bit-stable for golden-file comparisons.
inline void write_trajectory_csv(std::ostream& os, const Trajectory& traj) {
    os << "t,y\n";
    char buf[80];
    for (const TrajectorySample& s : traj.samples) {
        std::snprintf(buf, sizeof(buf), "%.17g,%.17g\n", s.t, s.y);
        os << buf;
    }
}

} // namespace blowuplab
