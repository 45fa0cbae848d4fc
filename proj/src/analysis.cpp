#include "levy/analysis.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "levy/error.hpp"

namespace levy {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();

// int_A^B f over a log-scaled variable
double log_scale_integral(const LevyModel::Fn& f, double A, double B) {
    auto g = [&](double s) {
        const double x = std::exp(s);
        return x * f(x);
    };
    return gauss_kronrod(g, std::log(A), std::log(B), {1e-10}).value;
}

bool increments_converge(double d1, double d2) {
    if (!std::isfinite(d1) || !std::isfinite(d2)) return false;
    return d2 <= 1e-6 || (d1 > 0.0 && d2 <= 0.999 * d1);
}

// |1+y|^g + |1-y|^g - 2 for y >= 0
double even_bracket(double g, double y) {
    if (y < 0.1) {
        double coef = 1.0;  // binom(g, n)
        double sum = 0.0;
        const double y2 = y * y;
        double pw = 1.0;
        for (int n = 1; n <= 40; ++n) {
            coef *= (g - n + 1) / n;
            if (n % 2 == 1) continue;
            pw *= y2;
            const double term = coef * pw;
            sum += term;
            if (std::abs(term) <= 1e-18 * std::abs(sum)) break;
        }
        return 2.0 * sum;
    }
    return std::pow(1.0 + y, g) + std::pow(std::abs(1.0 - y), g) - 2.0;
}

// |1-y|^g - (1+y)^g for 0 <= y <= 1
double odd_bracket(double g, double y) {
    if (y < 0.1) {
        double coef = 1.0;
        double sum = 0.0;
        double pw = 1.0;
        for (int n = 1; n <= 41; ++n) {
            coef *= (g - n + 1) / n;
            pw *= y;
            if (n % 2 == 0) continue;
            const double term = coef * pw;
            sum += term;
            if (std::abs(term) <= 1e-18 * std::abs(sum)) break;
        }
        return -2.0 * sum;
    }
    return std::pow(1.0 - y, g) - std::pow(1.0 + y, g);
}

// |1+y|^g - 1 without cancellation, y > -1 or y < -1
double power_minus_one(double g, double y) {
    if (y > -1.0) return std::expm1(g * std::log1p(y));
    return std::expm1(g * std::log(-1.0 - y));
}

// int_0^inf f split at 1 and 2 with a kink of exponent `kink` at 1.
double split_integral(const Integrand& f, double beta0, double kink, double decay, double tol) {
    double v = adaptive_quad(f, {0.0, 1.0}, tol, {beta0, kink}).value;
    v += adaptive_quad(f, {1.0, 2.0}, tol, {kink, 0.0}).value;
    v += adaptive_quad(f, {2.0, kInf}, tol, {0.0, 0.0, decay}).value;
    return v;
}

// (1/pi) int_0^inf (1 - cos(xi x)) h(xi) dxi for h decaying like xi^{-growth}
double one_minus_cos(const LevyModel::Fn& h, double growth, double x, double tol) {
    x = std::abs(x);
    if (x == 0.0) return 0.0;
    const double B = kPi / x;
    auto f = [&](double xi) {
        const double s = std::sin(0.5 * xi * x);
        return 2.0 * s * s * h(xi);
    };
    double inner = 0.0;
    double hi = B;
    for (int j = 0; j < 40; ++j) {
        const double lo = 0.5 * hi;
        inner += gauss_kronrod(f, lo, hi, {tol / 16.0}).value;
        hi = lo;
    }
    inner += gauss_kronrod(f, 0.0, hi, {tol / 16.0}).value;
    const double flat = adaptive_quad(h, {B, kInf}, tol, {0.0, 0.0, growth}).value;
    const double osc = oscillatory_cos(h, x, B, tol).value;
    return (inner + flat - osc) / kPi;
}

void require_gamma_in(std::optional<double> gamma, double lo, double hi, std::string_view what) {
    if (!gamma) throw RegimeError(std::string(what) + " requires gamma");
    if (!(*gamma > lo && *gamma < hi)) {
        std::ostringstream msg;
        msg << what << " requires gamma in (" << lo << ", " << hi << "), got " << *gamma;
        throw RegimeError(msg.str());
    }
}

}  // namespace

LevyModel LevyModel::stable(Alpha alpha) {
    LevyModel m;
    m.kind_ = ModelKind::stable;
    m.alpha_ = alpha;
    const double a = alpha.value();
    m.growth_ = a;
    if (alpha.is_brownian()) {
        m.sigma2_ = 2.0;
        m.psi_ = [](double xi) { return xi * xi; };
        m.density_ = [](double) { return 0.0; };
    } else {
        const double k5 = specfun::c5(alpha);
        m.psi_ = [a](double xi) { return std::pow(std::abs(xi), a); };
        m.density_ = [a, k5](double z) { return k5 * std::pow(std::abs(z), -a - 1.0); };
    }
    m.run_gates();
    return m;
}

LevyModel LevyModel::brownian(double sigma2) {
    if (!(sigma2 > 0.0)) throw RegimeError("brownian model needs sigma2 > 0");
    LevyModel m;
    m.kind_ = ModelKind::brownian;
    m.sigma2_ = sigma2;
    m.growth_ = 2.0;
    m.psi_ = [sigma2](double xi) { return 0.5 * sigma2 * xi * xi; };
    m.density_ = [](double) { return 0.0; };
    m.run_gates();
    return m;
}

LevyModel LevyModel::custom(double sigma2, Fn levy_density, Fn psi, double psi_decay) {
    if (!(sigma2 >= 0.0)) throw RegimeError("custom model needs sigma2 >= 0");
    if (!(psi_decay > 1.0)) throw IntegrabilityError("custom model: Psi must grow faster than |xi|");
    LevyModel m;
    m.kind_ = ModelKind::custom;
    m.sigma2_ = sigma2;
    m.growth_ = psi_decay;
    m.psi_ = std::move(psi);
    m.density_ = std::move(levy_density);

    if (m.psi_(0.0) != 0.0) throw IntegrabilityError("custom model: Psi(0) != 0");
    for (double xi = 1e-3; xi < 1e4; xi *= 1.7) {
        const double p = m.psi_(xi);
        const double n = m.psi_(-xi);
        if (!(p >= 0.0) || std::abs(p - n) > 1e-12 * std::abs(p)) {
            throw IntegrabilityError("custom model: Psi is not even and non-negative");
        }
        const double dp = m.density_(xi);
        if (!(dp >= 0.0) || std::abs(dp - m.density_(-xi)) > 1e-12 * dp) {
            throw IntegrabilityError("custom model: Levy density is not symmetric and non-negative");
        }
    }
    // int (1 ^ z^2) nu(dz): increments near 0 and near infinity must shrink
    auto z2nu = [&](double z) { return z * z * m.density_(z); };
    const double n1 = log_scale_integral(z2nu, 1e-4, 1e-3);
    const double n2 = log_scale_integral(z2nu, 1e-5, 1e-4);
    const double f1 = log_scale_integral(m.density_, 1e3, 1e4);
    const double f2 = log_scale_integral(m.density_, 1e4, 1e5);
    if (!increments_converge(n1, n2) || !increments_converge(f1, f2)) {
        throw IntegrabilityError("custom model: int (1 ^ z^2) nu(dz) does not converge");
    }
    m.run_gates();
    return m;
}

void LevyModel::run_gates() {
    auto h = [this](double xi) { return 1.0 / (1.0 + psi_(xi)); };
    gate_.d1 = log_scale_integral(h, 1e3, 1e4);
    gate_.d2 = log_scale_integral(h, 1e4, 1e5);
    gate_.passed = increments_converge(gate_.d1, gate_.d2);
    if (!gate_.passed) {
        std::ostringstream msg;
        msg << "int dxi/(1+Psi) does not converge: increments " << gate_.d1 << ", " << gate_.d2;
        throw IntegrabilityError(msg.str());
    }
}

double resolvent_u(const LevyModel& model, double p, double x, double tol) {
    if (!(p > 0.0)) throw RegimeError("resolvent_u requires p > 0");
    auto g = [&](double xi) { return 1.0 / (p + model.psi(xi)); };
    x = std::abs(x);
    if (x == 0.0) {
        return adaptive_quad(g, {0.0, kInf}, tol, {0.0, 0.0, model.growth()}).value / kPi;
    }
    return oscillatory_cos(g, x, 0.0, tol).value / kPi;
}

double v_potential(const LevyModel& model, double x, double tol) {
    auto h = [&](double xi) { return 1.0 / model.psi(xi); };
    return one_minus_cos(h, model.growth(), x, tol);
}

std::vector<double> resolvent_limit_check(const LevyModel& model, const std::vector<double>& p_sequence,
                                          double x, double tol) {
    if (p_sequence.empty()) throw RegimeError("resolvent_limit_check: empty p sequence");
    for (std::size_t i = 0; i < p_sequence.size(); ++i) {
        if (!(p_sequence[i] > 0.0)) throw RegimeError("resolvent_limit_check: p must be positive");
        if (i > 0 && !(p_sequence[i] < p_sequence[i - 1])) {
            throw RegimeError("resolvent_limit_check: p sequence must be strictly decreasing");
        }
    }
    if (p_sequence.back() > 1e-4) {
        throw RegimeError("resolvent_limit_check: p sequence must reach 1e-4 or below");
    }
    std::vector<double> out;
    out.reserve(p_sequence.size());
    for (double p : p_sequence) {
        auto h = [&](double xi) { return 1.0 / (p + model.psi(xi)); };
        out.push_back(one_minus_cos(h, model.growth(), x, tol));
    }
    return out;
}

std::string_view to_string(IntegralName name) noexcept {
    switch (name) {
        case IntegralName::c5_int: return "c5_int";
        case IntegralName::c3_rep: return "c3_rep";
        case IntegralName::c8_rep: return "c8_rep";
        case IntegralName::r: return "r";
        case IntegralName::q: return "q";
        case IntegralName::c6_int: return "c6_int";
        case IntegralName::c0_int: return "c0_int";
    }
    return "?";
}

IntegralName parse_integral_name(std::string_view text) {
    for (IntegralName n : {IntegralName::c5_int, IntegralName::c3_rep, IntegralName::c8_rep,
                           IntegralName::r, IntegralName::q, IntegralName::c6_int,
                           IntegralName::c0_int}) {
        if (to_string(n) == text) return n;
    }
    throw UnknownNameError("unknown integral name '" + std::string(text) + "'");
}

double constant_integral(IntegralName name, Alpha alpha, std::optional<double> gamma, double tol) {
    const double a = alpha.value();
    if (name == IntegralName::c0_int) {
        auto f = [a](double xi) { return std::exp(-std::pow(xi, a)); };
        return adaptive_quad(f, {0.0, kInf}, tol).value / kPi;
    }
    alpha.require_below_two(to_string(name));
    switch (name) {
        case IntegralName::c5_int: {
            auto f = [a](double y) {
                const double s = std::sin(0.5 * y);
                return 2.0 * s * s * std::pow(y, -a - 1.0);
            };
            const double head = adaptive_quad(f, {0.0, 1.0}, tol, {1.0 - a, 0.0}).value;
            auto g = [a](double y) { return std::pow(y, -a - 1.0); };
            return head + 1.0 / a - oscillatory_cos(g, 1.0, 1.0, tol).value;
        }
        case IntegralName::c6_int:
            return v_potential(LevyModel::stable(alpha), 1.0, tol);
        case IntegralName::c3_rep: {
            require_gamma_in(gamma, 0.0, a, "c3_rep");
            const double g = *gamma;
            auto f = [a, g](double y) { return std::pow(y, -a - 1.0) * even_bracket(g, y); };
            return specfun::c5(alpha) * split_integral(f, 1.0 - a, g, a + 1.0 - g, tol);
        }
        case IntegralName::c8_rep: {
            require_gamma_in(gamma, 0.0, 0.5 * a, "c8_rep");
            const double g = *gamma;
            auto f = [a, g](double y) {
                const double u = power_minus_one(g, y);
                const double w = power_minus_one(g, -y);
                return std::pow(y, -a - 1.0) * (u * u + w * w);
            };
            return specfun::c5(alpha) * split_integral(f, 1.0 - a, g, a + 1.0 - 2.0 * g, tol);
        }
        case IntegralName::r: {
            require_gamma_in(gamma, 0.5 * (a - 1.0), a - 1.0, "r");
            const double s = a - *gamma;
            const double g = a - 1.0;
            auto f = [s, g](double z) {
                const double b = z < 1.0 ? even_bracket(g, z) - 2.0 * std::pow(z, g)
                                         : std::pow(z, g) * even_bracket(g, 1.0 / z) - 2.0;
                return std::pow(z, -s) * b;
            };
            return split_integral(f, *gamma - 1.0, g, s, tol);
        }
        case IntegralName::q: {
            require_gamma_in(gamma, 0.5 * (a - 1.0), 1.0, "q");
            const double th = a - *gamma;
            const double g = a - 1.0;
            auto f = [th, g](double x) {
                const double d = x <= 1.0 ? odd_bracket(g, x) : std::pow(x, g) * odd_bracket(g, 1.0 / x);
                return std::pow(x, -th) * d;
            };
            return split_integral(f, 1.0 - th, g, th + 2.0 - a, tol);
        }
        case IntegralName::c0_int: break;
    }
    throw UnknownNameError("unknown integral");
}

std::optional<double> integral_value(specfun::ConstantName name, Alpha alpha,
                                     std::optional<double> gamma, double tol) {
    using specfun::ConstantName;
    const double a = alpha.value();
    switch (name) {
        case ConstantName::c0: return constant_integral(IntegralName::c0_int, alpha, {}, tol);
        case ConstantName::c1:
            if (alpha.is_brownian()) return std::nullopt;
            return 1.0 / constant_integral(IntegralName::c6_int, alpha, {}, tol);
        case ConstantName::c2: return constant_integral(IntegralName::c8_rep, alpha, a - 1.0, tol);
        case ConstantName::c3:
            if (alpha.is_brownian()) return std::nullopt;
            if (!gamma || !specfun::gamma_regime(name, alpha).contains(*gamma)) {
                throw RegimeError("c3 integral requires gamma in (alpha-1, alpha)");
            }
            return constant_integral(IntegralName::c3_rep, alpha, gamma, tol);
        case ConstantName::c4:
            alpha.require_below_two("c4");
            if (!gamma || !specfun::gamma_regime(name, alpha).contains(*gamma)) {
                throw RegimeError("c4 integral requires gamma in ((alpha-1)/2, alpha-1)");
            }
            return constant_integral(IntegralName::c3_rep, alpha, gamma, tol);
        case ConstantName::c5: return 1.0 / (2.0 * constant_integral(IntegralName::c5_int, alpha, {}, tol));
        case ConstantName::c6: return constant_integral(IntegralName::c6_int, alpha, {}, tol);
        case ConstantName::c7: {
            const double k2 = constant_integral(IntegralName::c8_rep, alpha, a - 1.0, tol);
            const double k6 = constant_integral(IntegralName::c6_int, alpha, {}, tol);
            return k2 * k6 * k6;
        }
        case ConstantName::c8: return constant_integral(IntegralName::c8_rep, alpha, gamma, tol);
        case ConstantName::r: return constant_integral(IntegralName::r, alpha, gamma, tol);
        case ConstantName::q: return constant_integral(IntegralName::q, alpha, gamma, tol);
    }
    return std::nullopt;
}

void fill_integral_reps(specfun::ConstantsRecord& record, double tol) {
    using specfun::ConstantName;
    for (ConstantName name : specfun::kAllConstants) {
        auto& entry = record.entries[name];
        try {
            entry.integral_rep = integral_value(name, record.alpha, record.gamma, tol);
        } catch (const RegimeError&) {
            entry.integral_rep.reset();
        }
    }
    const auto& r = record.entries[ConstantName::r].integral_rep;
    if (r) {
        record.entries[ConstantName::c4].closed_form = specfun::constant_closed_form(
            ConstantName::c4, record.alpha, record.gamma, *r);
    }
}

}  // namespace levy
