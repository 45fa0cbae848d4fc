#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "levy/quadrature.hpp"
#include "levy/specfun.hpp"

namespace levy {

enum class ModelKind { stable, brownian, custom };

/// Outcome of the numeric integrability gates run when a model is built.
struct IntegrabilityGate {
    // increments of int_1^X dxi/(1+Psi) over X: 1e3 -> 1e4 and 1e4 -> 1e5
    double d1 = 0.0;
    double d2 = 0.0;
    bool passed = false;
};

/// Symmetric Levy process: Psi(xi) = sigma2 xi^2/2 + int (1 - cos(xi z)) nu(dz).
class LevyModel {
public:
    using Fn = std::function<double(double)>;

    /// Psi = |xi|^alpha, nu(dz) = c5 |z|^{-alpha-1} dz (at alpha = 2: sigma2 = 2, nu = 0).
    static LevyModel stable(Alpha alpha);
    /// Psi = sigma2 xi^2 / 2.
    static LevyModel brownian(double sigma2 = 1.0);
    /// User-supplied exponent and Levy density. `psi_decay` is the power with
    /// which Psi grows (used only as a quadrature hint). Runs the symmetry,
    /// Levy-measure and resolvent integrability gates; throws IntegrabilityError.
    static LevyModel custom(double sigma2, Fn levy_density, Fn psi, double psi_decay = 2.0);

    double psi(double xi) const { return psi_(xi); }
    double levy_density(double z) const { return density_(z); }
    double sigma2() const noexcept { return sigma2_; }
    ModelKind kind() const noexcept { return kind_; }
    std::optional<Alpha> alpha() const noexcept { return alpha_; }
    /// Growth exponent of Psi at infinity.
    double growth() const noexcept { return growth_; }
    const IntegrabilityGate& gate() const noexcept { return gate_; }

private:
    LevyModel() = default;
    void run_gates();

    ModelKind kind_ = ModelKind::custom;
    std::optional<Alpha> alpha_;
    double sigma2_ = 0.0;
    double growth_ = 2.0;
    Fn psi_;
    Fn density_;
    IntegrabilityGate gate_;
};

/// u^(p)(x) = (1/pi) int_0^inf cos(xi x)/(p + Psi(xi)) dxi.
double resolvent_u(const LevyModel& model, double p, double x, double tol = 1e-10);

/// v(x) = (1/pi) int_0^inf (1 - cos(xi x))/Psi(xi) dxi.
double v_potential(const LevyModel& model, double x, double tol = 1e-10);

/// u^(p)(0) - u^(p)(x) for each p of a strictly decreasing sequence ending at or below 1e-4.
/// Evaluated as one integral of (1 - cos(xi x))/(p + Psi), so there is no cancellation.
std::vector<double> resolvent_limit_check(const LevyModel& model, const std::vector<double>& p_sequence,
                                          double x, double tol = 1e-10);

enum class IntegralName { c5_int, c3_rep, c8_rep, r, q, c6_int, c0_int };

std::string_view to_string(IntegralName name) noexcept;
IntegralName parse_integral_name(std::string_view text);

/// Integral representations of the table constants.
///
///   c5_int  int_0^inf (1 - cos y) y^{-alpha-1} dy            (no gamma)
///   c3_rep  int nu(dy) (|1+y|^g - 1 - g y)                   0 < g < alpha
///   c8_rep  int nu(dy) (|1+y|^g - 1)^2                       0 < g < alpha/2
///   r       int |z|^{-s} (|1-z|^{a-1} - 1 - |z|^{a-1}) dz    s = a - g, (a-1)/2 < g < a-1
///   q       int_0^inf x^{-t}(|1-x|^{a-1} - (1+x)^{a-1}) dx   t = a - g, (a-1)/2 < g < 1
///   c6_int  (1/pi) int_0^inf (1 - cos xi) xi^{-alpha} dxi    (no gamma)
///   c0_int  (1/pi) int_0^inf exp(-xi^alpha) dxi              (no gamma)
///
/// nu includes the c5(alpha) prefactor. For r the term |z|^{a-1} is
/// subtracted: without it the integral diverges at infinity for every g > 0,
/// and its own Mellin integral vanishes by continuation, so c1/r still
/// matches the Doob-Meyer coefficient.
/// Throws RegimeError outside the ranges above, DegenerateAlphaError at alpha = 2.
double constant_integral(IntegralName name, Alpha alpha, std::optional<double> gamma = std::nullopt,
                         double tol = 1e-10);

/// Integral-representation value for one table constant, or nullopt when there is none.
///   c0 <- c0_int, c1 <- 1/c6_int, c2 <- c8_rep at gamma = alpha-1, c3 <- c3_rep,
///   c4 <- c3_rep (continued below alpha-1), c5 <- 1/(2 c5_int), c6 <- c6_int,
///   c7 <- c2 c6^2 from the integrals, c8 <- c8_rep, r <- r, q <- q.
std::optional<double> integral_value(specfun::ConstantName name, Alpha alpha,
                                     std::optional<double> gamma, double tol = 1e-10);

/// Fills the integral_rep column of every entry that has a closed form or is
/// r/q, and completes c4 = c1/r in the closed-form column.
void fill_integral_reps(specfun::ConstantsRecord& record, double tol = 1e-10);

}  // namespace levy
