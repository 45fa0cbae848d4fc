#pragma once

#include <cmath>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <variant>

#include "json.hpp"

namespace levy {

using DiagValue = std::variant<double, std::string>;

/// Outcome of one Monte Carlo comparison.
///
/// pass is recomputable from the stored fields:
///  - diagnostics["skip"] present (e.g. "boundary-skip"): pass, nothing compared;
///  - diagnostics["relative_tolerance"] present: |mc - target| <= rel * |target|;
///  - otherwise: |mc - target| <= tolerance_multiple * std_error;
/// and in every case each numeric diagnostic whose key starts with "gate_" must equal 1.
struct VerificationReport {
    std::string identity;
    double alpha = 0.0;
    std::optional<double> gamma;
    std::optional<double> x_level;
    std::size_t n_paths = 0;
    double mc_estimate = 0.0;
    double analytic_target = 0.0;
    double std_error = 0.0;
    double tolerance_multiple = 4.0;
    bool pass = false;
    std::map<std::string, DiagValue> diagnostics;

    bool recompute_pass() const;
    /// Sets pass from recompute_pass() and returns *this.
    VerificationReport& finalize();
    bool skipped() const { return diagnostics.count("skip") != 0; }

    nlohmann::ordered_json to_json() const;
    static VerificationReport from_json(const nlohmann::ordered_json& j);
};

/// Names of the JSON fields, in output order.
inline constexpr const char* kReportFields[] = {
    "identity",  "alpha",     "gamma",              "x_level", "n_paths",     "mc_estimate",
    "analytic_target", "std_error", "tolerance_multiple", "pass", "diagnostics"};

/// One line: identity, PASS/FAIL/SKIP, estimate vs target.
std::string report_line(const VerificationReport& r);

/// Mean and standard error of a sample.
struct SampleStats {
    double mean = 0.0;
    double std_error = 0.0;
};
template <class Range>
SampleStats sample_stats(const Range& xs) {
    double n = 0.0, mean = 0.0, m2 = 0.0;
    for (double x : xs) {
        n += 1.0;
        const double d = x - mean;
        mean += d / n;
        m2 += d * (x - mean);
    }
    if (n < 2.0) return {mean, 0.0};
    return {mean, std::sqrt(m2 / (n - 1.0) / n)};
}

}  // namespace levy
