#include "levy/quadrature.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <queue>
#include <vector>

#include "levy/error.hpp"

namespace levy {
namespace {

// Kronrod nodes and weights (21 points) with the embedded 10-point Gauss rule.
constexpr std::array<double, 11> kXgk = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.0};
constexpr std::array<double, 11> kWgk = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077600525478236, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};
constexpr std::array<double, 5> kWg = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

struct Piece {
    double a, b, value, error;
    bool operator<(const Piece& o) const { return error < o.error; }
};

Piece gk21(const Integrand& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    const double fc = f(c);
    double kron = fc * kWgk[10];
    double gauss = 0.0;
    for (int j = 0; j < 10; ++j) {
        const double dx = h * kXgk[j];
        const double s = f(c - dx) + f(c + dx);
        kron += kWgk[j] * s;
        if (j % 2 == 1) gauss += kWg[j / 2] * s;
    }
    kron *= h;
    gauss *= h;
    return {a, b, kron, std::abs(kron - gauss)};
}

double mapping_power(double beta) {
    if (beta < 0.0) return 2.0 / (1.0 + beta);
    if (beta > 0.0 && beta < 1.0) return 2.0;
    return 1.0;
}

// int_a^b f with f ~ (x-a)^beta near a.
QuadratureResult left_singular(const Integrand& f, double a, double b, double beta, double tol) {
    const double m = mapping_power(beta);
    if (m == 1.0) return gauss_kronrod(f, a, b, {tol});
    const double w = b - a;
    auto g = [&](double u) {
        const double um1 = std::pow(u, m - 1.0);
        return w * m * um1 * f(a + w * um1 * u);
    };
    return gauss_kronrod(g, 0.0, 1.0, {tol});
}

QuadratureResult right_singular(const Integrand& f, double a, double b, double beta, double tol) {
    auto flipped = [&](double y) { return f(a + b - y); };
    return left_singular(flipped, a, b, beta, tol);
}

QuadratureResult finite(const Integrand& f, double a, double b, const EndpointHints& h, double tol) {
    const bool sa = h.beta_a != 0.0;
    const bool sb = h.beta_b != 0.0;
    if (sa && sb) {
        const double c = 0.5 * (a + b);
        QuadratureResult r = left_singular(f, a, c, h.beta_a, tol);
        r += right_singular(f, c, b, h.beta_b, tol);
        return r;
    }
    if (sa) return left_singular(f, a, b, h.beta_a, tol);
    if (sb) return right_singular(f, a, b, h.beta_b, tol);
    return gauss_kronrod(f, a, b, {tol});
}

// Wynn epsilon table on partial sums; returns the deepest even-column entry.
double wynn_epsilon(const std::vector<double>& s) {
    const std::size_t n = s.size();
    std::vector<double> prev(n + 1, 0.0);  // eps_{-1}
    std::vector<double> cur(s.begin(), s.end());  // eps_0
    double best = s.back();
    for (std::size_t k = 1; k < n; ++k) {
        std::vector<double> next(n - k);
        bool ok = true;
        for (std::size_t i = 0; i + k < n; ++i) {
            const double d = cur[i + 1] - cur[i];
            if (d == 0.0) {
                ok = false;
                break;
            }
            next[i] = prev[i + 1] + 1.0 / d;
        }
        if (!ok) break;
        prev = std::move(cur);
        cur = std::move(next);
        if (k % 2 == 0) best = cur.back();
    }
    return best;
}

}  // namespace

QuadratureResult gauss_kronrod(const Integrand& f, double a, double b, const QuadOptions& opt) {
    if (a == b) return {};
    std::priority_queue<Piece> heap;
    Piece first = gk21(f, a, b);
    double total = first.value;
    double err = first.error;
    std::size_t evals = 21;
    heap.push(first);
    while (err > opt.tol * (1.0 + std::abs(total))) {
        if (heap.size() >= opt.max_intervals) {
            throw ConvergenceError("gauss_kronrod: interval budget exhausted", total, err);
        }
        Piece worst = heap.top();
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(mid > worst.a && mid < worst.b)) {
            throw ConvergenceError("gauss_kronrod: interval cannot be bisected further", total, err);
        }
        heap.pop();
        Piece l = gk21(f, worst.a, mid);
        Piece r = gk21(f, mid, worst.b);
        evals += 42;
        total += l.value + r.value - worst.value;
        err += l.error + r.error - worst.error;
        heap.push(l);
        heap.push(r);
    }
    // recompute the sums to shed accumulated rounding
    total = 0.0;
    err = 0.0;
    while (!heap.empty()) {
        total += heap.top().value;
        err += heap.top().error;
        heap.pop();
    }
    if (!std::isfinite(total)) {
        throw ConvergenceError("gauss_kronrod: non-finite integrand value", total, err);
    }
    return {total, err, evals};
}

QuadratureResult adaptive_quad(const Integrand& f, Domain d, double tol, EndpointHints hints) {
    if (!(tol > 0.0)) throw RegimeError("adaptive_quad: tol must be positive");
    if (std::isinf(d.a)) throw RegimeError("adaptive_quad: lower limit must be finite");
    if (std::isfinite(d.b)) {
        if (d.b < d.a) throw RegimeError("adaptive_quad: empty domain");
        return finite(f, d.a, d.b, hints, tol);
    }
    if (!(hints.tail_decay > 1.0)) {
        throw RegimeError("adaptive_quad: tail decay exponent must exceed 1");
    }
    QuadratureResult out;
    double A = d.a;
    if (A <= 0.0) {
        out = finite(f, d.a, 1.0, {hints.beta_a, 0.0, hints.tail_decay}, tol);
        A = 1.0;
    }
    const double k = 2.0 / (hints.tail_decay - 1.0);
    auto g = [&](double w) {
        const double wk = std::pow(w, -k);
        return A * k * wk / w * f(A * wk);
    };
    out += gauss_kronrod(g, 0.0, 1.0, {tol});
    return out;
}

QuadratureResult oscillatory_cos(const Integrand& g, double x, double start, double tol) {
    x = std::abs(x);
    if (x == 0.0) {
        throw RegimeError("oscillatory_cos: frequency must be non-zero");
    }
    constexpr double pi = std::numbers::pi;
    const double h = pi / x;
    auto f = [&](double xi) { return g(xi) * std::cos(xi * x); };
    const double z0 = (std::floor(start / h + 0.5) + 0.5) * h;  // first zero above start
    QuadratureResult out;

    // pieces [start, z0], refined geometrically toward start
    const QuadOptions fine{tol / 16.0};
    constexpr int kLevels = 40;
    double hi = z0;
    for (int j = 0; j < kLevels; ++j) {
        const double lo = start + 0.5 * (hi - start);
        out += gauss_kronrod(f, lo, hi, fine);
        hi = lo;
    }
    out += gauss_kronrod(f, start, hi, fine);

    std::vector<double> partial;
    double running = 0.0;
    double panel_err = 0.0;
    double last = 0.0, before = 0.0;
    constexpr std::size_t kMaxPanels = 4000;
    for (std::size_t k = 0; k < kMaxPanels; ++k) {
        const double a = z0 + static_cast<double>(k) * h;
        QuadratureResult p = gauss_kronrod(f, a, a + h, fine);
        running += p.value;
        panel_err += p.error_estimate;
        out.evaluations += p.evaluations;
        partial.push_back(running);
        if (partial.size() > 60) partial.erase(partial.begin());
        if (k < 6) continue;
        const double est = wynn_epsilon(partial);
        const double d1 = std::abs(est - last);
        const double d2 = std::abs(est - before);
        before = last;
        last = est;
        if (k >= 8 && std::max(d1, d2) <= 0.1 * tol * (1.0 + std::abs(out.value + est))) {
            out.value += est;
            out.error_estimate += std::max(d1, d2) + panel_err;
            return out;
        }
    }
    throw ConvergenceError("oscillatory_cos: panel series did not converge", out.value + last,
                           std::abs(last - before));
}

}  // namespace levy
