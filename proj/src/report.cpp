#include "levy/report.hpp"

#include <cstdio>

namespace levy {

bool VerificationReport::recompute_pass() const {
    if (skipped()) return true;
    for (const auto& [key, value] : diagnostics) {
        if (key.rfind("gate_", 0) == 0) {
            const double* v = std::get_if<double>(&value);
            if (!v || *v != 1.0) return false;
        }
    }
    if (!std::isfinite(mc_estimate) || !std::isfinite(analytic_target)) return false;
    const double gap = std::abs(mc_estimate - analytic_target);
    auto it = diagnostics.find("relative_tolerance");
    if (it != diagnostics.end()) {
        const double* rel = std::get_if<double>(&it->second);
        return rel && gap <= *rel * std::abs(analytic_target);
    }
    return std::isfinite(std_error) && gap <= tolerance_multiple * std_error;
}

VerificationReport& VerificationReport::finalize() {
    pass = recompute_pass();
    return *this;
}

nlohmann::ordered_json VerificationReport::to_json() const {
    nlohmann::ordered_json diag = nlohmann::ordered_json::object();
    for (const auto& [key, value] : diagnostics) {
        std::visit([&](const auto& v) { diag[key] = v; }, value);
    }
    nlohmann::ordered_json j;
    j["identity"] = identity;
    j["alpha"] = alpha;
    j["gamma"] = gamma ? nlohmann::ordered_json(*gamma) : nlohmann::ordered_json(nullptr);
    j["x_level"] = x_level ? nlohmann::ordered_json(*x_level) : nlohmann::ordered_json(nullptr);
    j["n_paths"] = n_paths;
    j["mc_estimate"] = mc_estimate;
    j["analytic_target"] = analytic_target;
    j["std_error"] = std_error;
    j["tolerance_multiple"] = tolerance_multiple;
    j["pass"] = pass;
    j["diagnostics"] = diag;
    return j;
}

VerificationReport VerificationReport::from_json(const nlohmann::ordered_json& j) {
    VerificationReport r;
    r.identity = j.at("identity").get<std::string>();
    r.alpha = j.at("alpha").get<double>();
    if (!j.at("gamma").is_null()) r.gamma = j.at("gamma").get<double>();
    if (!j.at("x_level").is_null()) r.x_level = j.at("x_level").get<double>();
    r.n_paths = j.at("n_paths").get<std::size_t>();
    r.mc_estimate = j.at("mc_estimate").get<double>();
    r.analytic_target = j.at("analytic_target").get<double>();
    r.std_error = j.at("std_error").get<double>();
    r.tolerance_multiple = j.at("tolerance_multiple").get<double>();
    r.pass = j.at("pass").get<bool>();
    for (const auto& [key, value] : j.at("diagnostics").items()) {
        if (value.is_string()) {
            r.diagnostics[key] = value.get<std::string>();
        } else {
            r.diagnostics[key] = value.get<double>();
        }
    }
    return r;
}

std::string report_line(const VerificationReport& r) {
    const char* status = r.skipped() ? "SKIP" : (r.pass ? "PASS" : "FAIL");
    char buf[512];
    std::snprintf(buf, sizeof buf, "%-32s %s  alpha=%.17g  est=%.17g  target=%.17g  se=%.17g",
                  r.identity.c_str(), status, r.alpha, r.mc_estimate, r.analytic_target, r.std_error);
    return buf;
}

}  // namespace levy
