#include "levy/specfun.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <sstream>

#include "levy/error.hpp"

namespace levy {

Alpha::Alpha(double value) : value_(value) {
    if (!(value > 1.0 && value <= 2.0)) {
        std::ostringstream msg;
        msg << "alpha must lie in (1, 2], got " << value;
        throw RegimeError(msg.str());
    }
}

void Alpha::require_below_two(std::string_view what) const {
    if (is_brownian()) {
        throw DegenerateAlphaError(std::string(what) + " requires alpha < 2 (Gamma pole at alpha = 2)");
    }
}

namespace specfun {
namespace {

constexpr double kPi = std::numbers::pi;

// Lanczos coefficients, g = 671/128 = 5.2421875, n = 14.
constexpr std::array<double, 14> kLanczos = {
    57.1562356658629235,     -59.5979603554754912,    14.1360979747417471,
    -0.491913816097620199,   .339946499848118887e-4,  .465236289270485756e-4,
    -.983744753048795646e-4, .158088703224912494e-3,  -.210264441724104883e-3,
    .217439618115212643e-3,  -.164318106536763890e-3, .844182239838527433e-4,
    -.261908384015814087e-4, .368991826595316234e-5};

double lanczos_gamma(double x) {
    double series = 0.999999999999997092;
    double y = x;
    for (double c : kLanczos) {
        y += 1.0;
        series += c / y;
    }
    const double t = x + 5.2421875;
    // t^(x+1/2) split in two halves so that large x does not overflow early.
    const double half = std::pow(t, 0.5 * (x + 0.5));
    return 2.5066282746310005 * series / x * half * (half * std::exp(-t));
}

bool is_pole(double x) { return x <= 0.0 && x == std::floor(x); }

void require_gamma(ConstantName name, Alpha alpha, std::optional<double> gamma) {
    if (!gamma) {
        throw RegimeError(std::string(to_string(name)) + " requires a gamma exponent");
    }
    const GammaRegime regime = gamma_regime(name, alpha);
    if (!regime.contains(*gamma)) {
        std::ostringstream msg;
        msg << to_string(name) << " requires gamma in " << regime.describe() << " at alpha = "
            << alpha.value() << ", got " << *gamma;
        throw RegimeError(msg.str());
    }
}

bool within_rel(double a, double b, double tol) {
    return std::abs(a - b) <= tol * std::max(std::abs(a), std::abs(b));
}

}  // namespace

double sin_pi(double x) {
    // x - 2 round(x/2) is exact in binary floating point.
    double r = x - 2.0 * std::round(0.5 * x);  // r in [-1, 1]
    double sign = 1.0;
    if (r < 0) {
        r = -r;
        sign = -1.0;
    }
    if (r > 0.5) r = 1.0 - r;
    return sign * std::sin(kPi * r);
}

double gamma_fn(double x) {
    if (std::isnan(x)) throw PoleError("gamma_fn: NaN argument");
    if (is_pole(x)) {
        std::ostringstream msg;
        msg << "gamma_fn: pole at non-positive integer " << x;
        throw PoleError(msg.str());
    }
    if (x < 0.5) {
        return kPi / (sin_pi(x) * lanczos_gamma(1.0 - x));
    }
    return lanczos_gamma(x);
}

double moment_m(Alpha alpha, double gamma) {
    const double a = alpha.value();
    if (!(gamma > -1.0 && gamma < a)) {
        throw RegimeError("moment_m requires -1 < gamma < alpha = " + std::to_string(a) +
                          ", got " + std::to_string(gamma));
    }
    if (gamma == 0.0) return 1.0;
    return std::pow(2.0, gamma) * gamma_fn(0.5 * (1.0 + gamma)) * gamma_fn((a - gamma) / a) /
           (std::sqrt(kPi) * gamma_fn(0.5 * (2.0 - gamma)));
}

double finite_part_moment(Alpha alpha, double beta) {
    const double a = alpha.value();
    if (!(beta > -3.0 && beta < a) || beta == -1.0) {
        throw RegimeError("finite_part_moment requires -3 < beta < alpha, beta != -1");
    }
    return std::pow(2.0, beta) * gamma_fn(0.5 * (1.0 + beta)) * gamma_fn((a - beta) / a) /
           (std::sqrt(kPi) * gamma_fn(0.5 * (2.0 - beta)));
}

std::string_view to_string(ConstantName name) noexcept {
    switch (name) {
        case ConstantName::c0: return "c0";
        case ConstantName::c1: return "c1";
        case ConstantName::c2: return "c2";
        case ConstantName::c3: return "c3";
        case ConstantName::c4: return "c4";
        case ConstantName::c5: return "c5";
        case ConstantName::c6: return "c6";
        case ConstantName::c7: return "c7";
        case ConstantName::c8: return "c8";
        case ConstantName::r: return "r";
        case ConstantName::q: return "q";
    }
    return "?";
}

ConstantName parse_constant_name(std::string_view text) {
    for (ConstantName n : kAllConstants) {
        if (to_string(n) == text) return n;
    }
    throw UnknownNameError("unknown constant name '" + std::string(text) + "'");
}

bool depends_on_gamma(ConstantName name) noexcept {
    switch (name) {
        case ConstantName::c3:
        case ConstantName::c4:
        case ConstantName::c8:
        case ConstantName::r:
        case ConstantName::q: return true;
        default: return false;
    }
}

bool has_closed_form(ConstantName name) noexcept {
    return name != ConstantName::r && name != ConstantName::q;
}

bool GammaRegime::contains(double gamma) const noexcept {
    const bool lo_ok = lo_closed ? gamma >= lo : gamma > lo;
    const bool hi_ok = hi_closed ? gamma <= hi : gamma < hi;
    return lo_ok && hi_ok;
}

std::string GammaRegime::describe() const {
    std::ostringstream s;
    s << (lo_closed ? "[" : "(") << lo << ", " << hi << (hi_closed ? "]" : ")");
    return s.str();
}

GammaRegime gamma_regime(ConstantName name, Alpha alpha) {
    const double a = alpha.value();
    switch (name) {
        case ConstantName::c3: return {a - 1.0, a};
        case ConstantName::c4:
        case ConstantName::r: return {0.5 * (a - 1.0), a - 1.0};
        // gamma = alpha/2 makes m_{2 gamma} = m_alpha infinite.
        case ConstantName::c8: return {0.0, 0.5 * a};
        // The q integral converges at infinity only for gamma < 1.
        case ConstantName::q: return {0.5 * (a - 1.0), std::min(a, 1.0)};
        default: break;
    }
    throw RegimeError(std::string(to_string(name)) + " does not depend on gamma");
}

double c0(Alpha alpha) { return gamma_fn((alpha.value() + 1.0) / alpha.value()) / kPi; }

double c1(Alpha alpha) {
    const double a = alpha.value();
    return (a - 1.0) * kPi * moment_m(alpha, a - 1.0) / gamma_fn(1.0 / a);
}

double c2(Alpha alpha) {
    alpha.require_below_two("c2");
    const double a = alpha.value();
    return 2.0 * (a - 1.0) * moment_m(alpha, 2.0 * (a - 1.0)) / (a * moment_m(alpha, a - 2.0));
}

double c3(Alpha alpha, double gamma) {
    require_gamma(ConstantName::c3, alpha, gamma);
    const double a = alpha.value();
    return gamma * moment_m(alpha, gamma) / (a * moment_m(alpha, gamma - a));
}

// gamma m_gamma / (alpha m_{gamma-alpha}) on 0 < gamma < alpha. Below alpha-1 the
// denominator is the finite-part moment; at alpha-1 it is infinite and the value is 0.
double c3_continued(Alpha alpha, double gamma) {
    if (!(gamma > 0.0 && gamma < alpha.value())) {
        throw RegimeError("c3_continued requires 0 < gamma < alpha");
    }
    const double a = alpha.value();
    if (gamma == a - 1.0) return 0.0;
    if (gamma > a - 1.0) return c3(alpha, gamma);
    return gamma * moment_m(alpha, gamma) / (a * finite_part_moment(alpha, gamma - a));
}

double c5(Alpha alpha) {
    alpha.require_below_two("c5");
    const double a = alpha.value();
    // Gamma(1-a) < 0 and cos(a pi/2) < 0 on (1,2); the product is positive.
    return a / (2.0 * gamma_fn(1.0 - a) * std::cos(0.5 * a * kPi));
}

double c6(Alpha alpha) {
    alpha.require_below_two("c6");
    return 1.0 / c1(alpha);
}

double c6_direct(Alpha alpha) {
    alpha.require_below_two("c6");
    const double a = alpha.value();
    return gamma_fn(2.0 - a) / (a - 1.0) * std::cos(0.5 * (a - 1.0) * kPi) / kPi;
}

double c7(Alpha alpha) {
    const double k6 = c6(alpha);
    return c2(alpha) * k6 * k6;
}

double c8(Alpha alpha, double gamma) {
    alpha.require_below_two("c8");
    require_gamma(ConstantName::c8, alpha, gamma);
    return c3_continued(alpha, 2.0 * gamma) - 2.0 * c3_continued(alpha, gamma);
}

double c4_from_moments(Alpha alpha, double gamma) {
    alpha.require_below_two("c4");
    require_gamma(ConstantName::c4, alpha, gamma);
    const double a = alpha.value();
    return gamma * moment_m(alpha, gamma) / (a * finite_part_moment(alpha, gamma - a));
}

double constant_closed_form(ConstantName name, Alpha alpha, std::optional<double> gamma,
                            std::optional<double> r_value) {
    switch (name) {
        case ConstantName::c0: return c0(alpha);
        case ConstantName::c1: return c1(alpha);
        case ConstantName::c2: return c2(alpha);
        case ConstantName::c3:
            require_gamma(name, alpha, gamma);
            return c3(alpha, *gamma);
        case ConstantName::c4: {
            alpha.require_below_two("c4");
            require_gamma(name, alpha, gamma);
            if (!r_value) {
                throw NoClosedFormError("c4 = c1/r needs r(alpha, gamma) from the quadrature layer");
            }
            if (!(*r_value != 0.0 && std::isfinite(*r_value))) {
                throw RegimeError("c4: r must be finite and non-zero");
            }
            return c1(alpha) / *r_value;
        }
        case ConstantName::c5: return c5(alpha);
        case ConstantName::c6: return c6(alpha);
        case ConstantName::c7: return c7(alpha);
        case ConstantName::c8:
            require_gamma(name, alpha, gamma);
            return c8(alpha, *gamma);
        case ConstantName::r:
        case ConstantName::q:
            throw NoClosedFormError(std::string(to_string(name)) +
                                    " is only available as an integral");
    }
    throw UnknownNameError("unknown constant");
}

ConstantsRecord closed_form_record(Alpha alpha, std::optional<double> gamma) {
    ConstantsRecord record{alpha, gamma, {}};
    for (ConstantName name : kAllConstants) {
        ConstantEntry entry;
        if (has_closed_form(name) && name != ConstantName::c4) {
            try {
                entry.closed_form = constant_closed_form(name, alpha, gamma);
            } catch (const RegimeError&) {
                // outside regime: left absent
            }
        }
        record.entries[name] = entry;
    }
    return record;
}

std::vector<std::string> ConstantsRecord::invariant_violations() const {
    std::vector<std::string> out;
    auto value = [&](ConstantName n) -> std::optional<double> {
        auto it = entries.find(n);
        if (it == entries.end()) return std::nullopt;
        return it->second.closed_form;
    };
    for (const auto& [name, entry] : entries) {
        for (std::optional<double> v : {entry.closed_form, entry.integral_rep}) {
            if (!v) continue;
            if (!std::isfinite(*v)) {
                out.push_back(std::string(to_string(name)) + " is not finite");
            } else if (name != ConstantName::c4 && name != ConstantName::r &&
                       name != ConstantName::q && !(*v > 0.0)) {
                out.push_back(std::string(to_string(name)) + " is not strictly positive");
            }
        }
    }
    const auto k1 = value(ConstantName::c1);
    const auto k2 = value(ConstantName::c2);
    const auto k6 = value(ConstantName::c6);
    const auto k7 = value(ConstantName::c7);
    const auto k8 = value(ConstantName::c8);
    if (k1 && k6 && !within_rel(*k1 * *k6, 1.0, 1e-12)) out.push_back("c6 * c1 != 1");
    if (k2 && k6 && k7 && !within_rel(*k7, *k2 * *k6 * *k6, 1e-12)) out.push_back("c7 != c2 c6^2");
    if (k8 && gamma) {
        const double rhs = c3_continued(alpha, 2.0 * *gamma) - 2.0 * c3_continued(alpha, *gamma);
        if (!within_rel(*k8, rhs, 1e-12)) out.push_back("c8 != c3(2 gamma) - 2 c3(gamma)");
    }
    return out;
}

}  // namespace specfun
}  // namespace levy
