#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace levy {

/// Stability index of a symmetric alpha-stable law, 1 < alpha <= 2.
///
/// alpha == 2 is the Brownian reference case (X = sqrt(2) B). Formulas that
/// are only stated for alpha < 2 reject it with DegenerateAlphaError.
class Alpha {
public:
    explicit Alpha(double value);

    double value() const noexcept { return value_; }
    bool is_brownian() const noexcept { return value_ == 2.0; }

    /// Throws DegenerateAlphaError when alpha == 2; `what` names the caller.
    void require_below_two(std::string_view what) const;

    friend bool operator==(Alpha a, Alpha b) noexcept { return a.value_ == b.value_; }

private:
    double value_;
};

namespace specfun {

/// Gamma function for real arguments away from the poles 0, -1, -2, ...
///
/// Lanczos approximation (g = 671/128, 14 terms) for x >= 1/2 and the
/// reflection formula below. Relative error stays under 1e-13 on |x| <= 30.
double gamma_fn(double x);

/// sin(pi x) with exact argument reduction.
double sin_pi(double x);

/// Absolute moment E|X_1|^gamma of the standard symmetric alpha-stable law
/// with characteristic function exp(-|xi|^alpha). Requires -1 < gamma < alpha.
double moment_m(Alpha alpha, double gamma);

/// The same Gamma-function expression continued to -3 < beta < -1.
///
/// For these orders E|X_1|^beta is infinite; the continued value is the
/// finite part  int |x|^beta (p(x) - p(0)) dx  of the density p of X_1, which
/// is what the expectation of a principal-value time integral picks up.
double finite_part_moment(Alpha alpha, double beta);

enum class ConstantName { c0, c1, c2, c3, c4, c5, c6, c7, c8, r, q };

inline constexpr ConstantName kAllConstants[] = {
    ConstantName::c0, ConstantName::c1, ConstantName::c2, ConstantName::c3,
    ConstantName::c4, ConstantName::c5, ConstantName::c6, ConstantName::c7,
    ConstantName::c8, ConstantName::r,  ConstantName::q};

std::string_view to_string(ConstantName name) noexcept;

/// Parses "c0".."c8", "r", "q". Throws UnknownNameError otherwise.
ConstantName parse_constant_name(std::string_view text);

/// True for the constants whose value depends on gamma.
bool depends_on_gamma(ConstantName name) noexcept;

/// True for the constants that have a Gamma-function closed form (all but r, q).
bool has_closed_form(ConstantName name) noexcept;

/// Admissible open/closed gamma range of a gamma-dependent constant.
struct GammaRegime {
    double lo;
    double hi;
    bool lo_closed = false;
    bool hi_closed = false;

    bool contains(double gamma) const noexcept;
    double midpoint() const noexcept { return 0.5 * (lo + hi); }
    std::string describe() const;
};

/// Gamma regime of a gamma-dependent constant at the given alpha.
GammaRegime gamma_regime(ConstantName name, Alpha alpha);

/// Closed form of one table constant.
///
/// c4 has no self-contained closed form: the caller supplies r(alpha, gamma)
/// (from the quadrature layer) and receives c1 / r. r and q throw
/// NoClosedFormError. Gamma-dependent constants require `gamma` inside
/// gamma_regime(); violations raise RegimeError naming the range.
double constant_closed_form(ConstantName name, Alpha alpha,
                            std::optional<double> gamma = std::nullopt,
                            std::optional<double> r_value = std::nullopt);

// Named shorthands used throughout the library.
double c0(Alpha alpha);
double c1(Alpha alpha);
double c2(Alpha alpha);
double c3(Alpha alpha, double gamma);
double c5(Alpha alpha);
double c6(Alpha alpha);
double c7(Alpha alpha);
double c8(Alpha alpha, double gamma);

/// c3 extended to 0 < gamma < alpha. Below alpha-1 the denominator is the
/// finite-part moment (the value is negative); at gamma = alpha-1 it is 0.
/// This is what the integral  int nu(dy)(|1+y|^gamma - 1 - gamma y)  gives.
double c3_continued(Alpha alpha, double gamma);

/// c6 through the Gamma/cosine expression (1/pi) Gamma(2-a)/(a-1) cos((a-1)pi/2),
/// independent of c1.
double c6_direct(Alpha alpha);

/// gamma m_gamma / (alpha m_{gamma-alpha}) with the finite-part moment in the
/// denominator; for (alpha-1)/2 < gamma < alpha-1 this equals c1 / r.
double c4_from_moments(Alpha alpha, double gamma);

/// Closed form and integral-representation value of one table entry.
struct ConstantEntry {
    std::optional<double> closed_form;
    std::optional<double> integral_rep;
};

/// All table constants for one (alpha, gamma).
struct ConstantsRecord {
    Alpha alpha;
    std::optional<double> gamma;
    std::map<ConstantName, ConstantEntry> entries;

    /// Returns human-readable descriptions of violated invariants (empty when
    /// the record is consistent).
    std::vector<std::string> invariant_violations() const;
};

/// Fills the closed-form column for every constant whose regime admits
/// (alpha, gamma). Constants outside their regime are left absent.
ConstantsRecord closed_form_record(Alpha alpha, std::optional<double> gamma);

}  // namespace specfun
}  // namespace levy
