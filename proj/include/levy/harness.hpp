#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "levy/localtime.hpp"
#include "levy/report.hpp"
#include "levy/sampler.hpp"

namespace levy {

/// Simulation and estimator settings shared by the checks.
struct CheckConfig {
    double t = 1.0;
    std::size_t n_paths = 10000;
    std::size_t n_steps = 1u << 14;
    double epsilon = 1.0 / 32.0;  // half-width of the level box
    std::uint64_t seed = 42;
    // gate width in standard errors; unset means the per-check default (4, Dirichlet 5)
    std::optional<double> tolerance_multiple;
    // multiplies the constant in front of the increasing part (1 = no fault)
    double fault_scale = 1.0;

    double dt() const { return t / static_cast<double>(n_steps); }
    /// Throws RegimeError on n_paths < 2, odd or zero n_steps, eps <= 0, t < 0.
    void validate() const;
};

/// h(y) = int_{|z| > K} nu(dz) phi(|y|, z) for the stable Levy measure, phi(u, z) depending on
/// u + z only through |u + z| (so h is even).
///
/// Used to compensate jumps larger than K: sum_k psi(X_k, X_{k+1}) 1{|X_{k+1} - X_k| > K}
/// minus dt sum_k h(X_k) has mean zero up to O(dt / K^alpha) per unit time.
/// Tabulated in s = asinh(|y| / (K/1000)) up to |y| = 1e6 K with cubic interpolation;
/// direct quadrature beyond.
class JumpCompensator {
public:
    using Phi = std::function<double(double, double)>;

    /// growth: phi(u, z) ~ |z|^growth as |z| -> inf (must be < alpha);
    /// cusp: exponent of the kink of phi at z = -u.
    JumpCompensator(Alpha alpha, double K, Phi phi, double growth, double cusp);

    double operator()(double y) const;
    /// Quadrature without the table.
    double direct(double y) const;
    double threshold() const noexcept { return K_; }

private:
    double a_, k5_, K_, d_;
    Phi phi_;
    double tail_, cusp_;
    double ds_ = 0.0;
    std::vector<double> table_;
};

/// E[(N_t - N_s) g] for bounded functionals g of the path up to s.
struct MartingaleProbe {
    double s = 0.0;
    double t = 0.0;
    std::vector<std::string> names;
    std::vector<double> covariances;
    std::vector<double> std_errors;
    double tolerance_multiple = 4.0;

    bool pass() const;
};

MartingaleProbe martingale_probe(const std::vector<double>& n_s, const std::vector<double>& n_t, double s,
                                 double t,
                                 const std::vector<std::pair<std::string, std::vector<double>>>& functionals,
                                 double tolerance_multiple = 4.0);

/// Mean of N = F(X_t - x) - F(-x) - c1 Lbar^x_t, F = box average of |.|^{alpha-1} over
/// [-eps, eps] and Lbar the box local time, against 0. Also runs a martingale probe
/// at s = t/2 with g = sign(X_s - x), recorded as gate_probe.
VerificationReport tanaka_check(Alpha alpha, double x, const CheckConfig& cfg);

/// E N_t^2 (N from tanaka_check) against c2 E sum min(|X_s - x|^{alpha-2}, eps^{alpha-2}) dt.
/// Relative tolerance 10%; boundary-skip at alpha = 2.
VerificationReport bracket_check(Alpha alpha, double x, const CheckConfig& cfg);

/// E|X_t|^gamma against t^{gamma/alpha} m_gamma (exact draws of X_t).
VerificationReport moment_scaling_check(Alpha alpha, double gamma, double t, std::size_t n_paths,
                                        std::uint64_t seed = 42);

/// E box|X_t - x|^gamma - box|x|^gamma against c3 E int box|X_s - x|^{gamma-alpha} ds,
/// alpha-1 < gamma < alpha; the exact identity at x = 0 is recorded as gate_analytic (1e-12).
VerificationReport submartingale_decomposition_check(Alpha alpha, double gamma, double x,
                                                     const CheckConfig& cfg);

/// Same residual with c4 = c1/r and the finite-part box average (exponent gamma - alpha in
/// (-2,-1)), (alpha-1)/2 < gamma < alpha-1, gated at tolerance_multiple (default 5 here).
/// Adds the zero-quadratic-variation probe (gate_zero_qv) and the divergence probe of the
/// capped naive sum for gamma < alpha-1 (gate_divergence), both on min(n_paths, 1000) paths.
VerificationReport dirichlet_decomposition_check(Alpha alpha, double gamma, double x,
                                                 const CheckConfig& cfg);

/// N = q box(X_t)^{gamma,*} - c1 int box(X_s)^{-(alpha-gamma),*} ds against 0, plus a martingale
/// probe at s = t/2 with g1 = sign(X_s), g2 = min(|X_s|, 1) (gate_probe_sign, gate_probe_min).
/// (alpha-1)/2 < gamma < 1.
VerificationReport symmetric_power_check(Alpha alpha, double gamma, const CheckConfig& cfg);

/// f constant on bins [c_i - h, c_i + h) with the given weights.
struct StepFunction {
    std::vector<double> centers;
    double half_width = 0.0;
    std::vector<double> weights;

    double operator()(double x) const;
    /// int f(y) |a - y|^p dy in closed form.
    double convolve_abs_power(double a, double p) const;
    /// triangular hat 1 - |x| on [-1, 1] sampled on bins of half-width h
    static StepFunction hat(double h);
};

/// R = F(X_t) - F(0) - c1 dt sum_k f(X_k), F(y) = int f(x)|y - x|^{alpha-1} dx, against 0.
/// Throws SupportError when f is non-zero on its outermost bins.
VerificationReport ito_tanaka_check(Alpha alpha, const StepFunction& f, const CheckConfig& cfg);

/// Box local time at 0 against (alpha/(alpha-1)) c0 t^{(alpha-1)/alpha}, relative tolerance 10%.
/// mc_estimate is the Richardson combination (2^{alpha-1} L(eps) - L(2 eps))/(2^{alpha-1} - 1);
/// the raw L(eps) and the raw estimate at (dt/2, eps/2) from the same paths are in the
/// diagnostics, and gate_refinement requires the raw error to shrink.
VerificationReport local_time_mean_check(Alpha alpha, const CheckConfig& cfg);

/// All check names accepted by run_check / the CLI.
const std::vector<std::string>& check_names();

/// Parameters of a named run; gamma and x fall back to the per-check defaults.
struct SuiteParams {
    Alpha alpha{1.5};
    std::optional<double> gamma;
    std::optional<double> x;
    CheckConfig cfg;
};

/// Runs one named check (throws UnknownNameError). "identity" and "moment_scaling" use
/// cfg.n_paths draws; the others simulate paths.
std::vector<VerificationReport> run_check(const std::string& name, const SuiteParams& params);

}  // namespace levy
