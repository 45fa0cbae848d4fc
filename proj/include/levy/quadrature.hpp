#pragma once

#include <cstddef>
#include <functional>
#include <limits>

namespace levy {

struct QuadratureResult {
    double value = 0.0;
    double error_estimate = 0.0;
    std::size_t evaluations = 0;

    QuadratureResult& operator+=(const QuadratureResult& o) {
        value += o.value;
        error_estimate += o.error_estimate;
        evaluations += o.evaluations;
        return *this;
    }
};

using Integrand = std::function<double(double)>;

struct QuadOptions {
    double tol = 1e-10;
    std::size_t max_intervals = 4000;
};

/// Interval [a, b]; b may be +infinity.
struct Domain {
    double a = 0.0;
    double b = std::numeric_limits<double>::infinity();
};

/// Hints for integrands with algebraic endpoint behaviour.
struct EndpointHints {
    // f ~ (x-a)^beta_a near a and (b-x)^beta_b near b; 0 means regular.
    double beta_a = 0.0;
    double beta_b = 0.0;
    // f ~ x^{-tail_decay} at infinity; must exceed 1.
    double tail_decay = 2.0;
};

/// Adaptive Gauss-Kronrod (10/21 point) with global bisection.
/// Stops when the summed |K21 - G10| over all intervals is <= tol (1 + |value|).
QuadratureResult gauss_kronrod(const Integrand& f, double a, double b, const QuadOptions& opt = {});

/// Main entry point. Finite domains with singular endpoints are mapped by
/// x = a + (b-a) u^m (m chosen from beta so the mapped integrand is ~u), an
/// interior split is used when both ends are singular, and [A, inf) with A > 0
/// is mapped by x = A w^{-k}, k = 2/(tail_decay-1). Throws ConvergenceError
/// with the best estimate when the interval budget is exhausted.
QuadratureResult adaptive_quad(const Integrand& f, Domain domain, double tol = 1e-10,
                               EndpointHints hints = {});

/// int_start^inf g(xi) cos(xi x) dxi for g eventually monotone and decaying.
///
/// The range is cut at the zeros of cos(xi x); the half-period panels form an
/// alternating series which is summed with Wynn's epsilon algorithm. The
/// stretch before the first zero is split geometrically toward `start` so
/// that sharp features near the origin are resolved.
QuadratureResult oscillatory_cos(const Integrand& g, double x, double start = 0.0,
                                 double tol = 1e-10);

}  // namespace levy
