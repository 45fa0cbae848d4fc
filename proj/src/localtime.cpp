#include "levy/localtime.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "levy/error.hpp"

namespace levy {
namespace {

std::size_t grid_index(const SamplePath& path, double t) {
    const double k = t / path.dt();
    const double r = std::round(k);
    if (std::abs(k - r) > 1e-9 * std::max(1.0, k) || r < 0 || r > static_cast<double>(path.n_steps)) {
        std::ostringstream msg;
        msg << "time " << t << " is not on the path grid";
        throw RegimeError(msg.str());
    }
    return static_cast<std::size_t>(r);
}

double sign(double v) { return v > 0 ? 1.0 : (v < 0 ? -1.0 : 0.0); }

// trapezoid of g over the sorted nodes
double trapezoid(const std::vector<double>& z, const std::function<double(double)>& g) {
    double s = 0.0;
    for (std::size_t k = 1; k < z.size(); ++k) s += 0.5 * (z[k] - z[k - 1]) * (g(z[k]) + g(z[k - 1]));
    return s;
}

// nodes {c} U {grid offsets in (c, R)} U {R}
std::vector<double> nodes(double c, double R, double h) {
    std::vector<double> z{c};
    for (double k = std::floor(c / h) + 1; k * h < R - 1e-12 * h; k += 1.0) {
        if (k * h > c + 1e-12 * h) z.push_back(k * h);
    }
    z.push_back(R);
    return z;
}

}  // namespace

double LocalTimeField::final_at(double x) const {
    const std::size_t nt = t_grid.size();
    if (x_centers.empty() || nt == 0) return 0.0;
    if (x < x_centers.front() || x > x_centers.back()) return 0.0;
    auto it = std::upper_bound(x_centers.begin(), x_centers.end(), x);
    if (it == x_centers.end()) return at(x_centers.size() - 1, nt - 1);
    const std::size_t i1 = static_cast<std::size_t>(it - x_centers.begin());
    const std::size_t i0 = i1 - 1;
    const double w = (x - x_centers[i0]) / (x_centers[i1] - x_centers[i0]);
    return (1.0 - w) * at(i0, nt - 1) + w * at(i1, nt - 1);
}

double PrincipalValueEstimate::sensitivity() const {
    return std::max(std::abs(value_half_cutoff - value), std::abs(value_double_cutoff - value));
}

std::vector<double> default_x_grid(Alpha alpha, double t) {
    const double half = 4.0 * std::pow(t, 1.0 / alpha.value());
    std::vector<double> xs(401);
    for (int i = 0; i < 401; ++i) xs[i] = -half + 2.0 * half * i / 400.0;
    return xs;
}

LocalTimeField estimate_field(const SamplePath& path, const std::vector<double>& x_centers,
                              double epsilon, const std::vector<double>& t_grid) {
    if (!(epsilon > 0.0)) throw RegimeError("estimate_field requires epsilon > 0");
    if (x_centers.empty()) throw RegimeError("estimate_field requires a non-empty x grid");
    for (std::size_t i = 1; i < x_centers.size(); ++i) {
        if (!(x_centers[i] > x_centers[i - 1])) throw RegimeError("x grid must be strictly increasing");
    }
    std::vector<std::size_t> ks;
    for (double t : t_grid) {
        ks.push_back(grid_index(path, t));
        if (ks.size() > 1 && ks.back() < ks[ks.size() - 2]) throw RegimeError("t grid must be increasing");
    }
    LocalTimeField f;
    f.x_centers = x_centers;
    f.epsilon = epsilon;
    f.t_grid = t_grid;
    f.alpha = path.alpha;
    f.seed = path.seed;
    f.derivation = path.derivation;
    f.dt = path.dt();
    if (f.dt > std::pow(epsilon, path.alpha.value())) {
        f.warnings.push_back("bias regime: dt > eps^alpha");
    }
    const std::size_t nx = x_centers.size(), nt = t_grid.size();
    f.values.assign(nx * nt, 0.0);
    std::vector<double> counts(nx, 0.0);
    std::size_t k = 0;
    for (std::size_t j = 0; j < nt; ++j) {
        for (; k < ks[j]; ++k) {
            const double x = path.values[k];
            // centers with x - eps <= X < x + eps, i.e. X - eps < x_i <= X + eps
            auto lo = std::upper_bound(x_centers.begin(), x_centers.end(), x - epsilon);
            auto hi = std::upper_bound(lo, x_centers.end(), x + epsilon);
            for (auto it = lo; it != hi; ++it) counts[static_cast<std::size_t>(it - x_centers.begin())] += 1.0;
        }
        const double w = f.dt / (2.0 * epsilon);
        for (std::size_t i = 0; i < nx; ++i) f.values[i * nt + j] = w * counts[i];
    }
    return f;
}

double occupation_residual(const SamplePath& path, const LocalTimeField& field,
                           const std::function<double(double)>& f) {
    if (field.t_grid.empty()) return 0.0;
    const double lo = field.x_centers.front(), hi = field.x_centers.back();
    const double e = field.epsilon;
    for (int s = 0; s <= 20; ++s) {
        const double u = s / 20.0;
        for (double probe : {lo - e + 2 * e * u, hi - e + 2 * e * u, lo - 10 * e * (1 + u), hi + 10 * e * (1 + u)}) {
            if (f(probe) != 0.0) throw SupportError("test function must vanish on the boundary bins");
        }
    }
    const std::size_t K = grid_index(path, field.t_grid.back());
    double time_side = 0.0;
    for (std::size_t k = 0; k < K; ++k) time_side += f(path.values[k]);
    time_side *= path.dt();
    double space_side = 0.0;
    const std::size_t nt = field.t_grid.size();
    for (std::size_t i = 0; i < field.x_centers.size(); ++i) {
        space_side += f(field.x_centers[i]) * field.at(i, nt - 1);
    }
    space_side *= 2.0 * e;
    return std::abs(time_side - space_side);
}

PrincipalValueEstimate pv_centered(const LocalTimeField& field, double x, double exponent,
                                   double truncation) {
    if (field.alpha) {
        const double a = field.alpha->value();
        if (!(exponent > 1.0 && exponent < 0.5 * (a + 1.0))) {
            throw RegimeError("pv_centered requires exponent in (1, (alpha+1)/2)");
        }
    } else if (!(exponent > 0.0)) {
        throw RegimeError("pv_centered requires a positive exponent");
    }
    const double h = field.spacing();
    if (!(truncation > 2.0 * h)) throw RegimeError("pv_centered: truncation must exceed two grid spacings");
    if (x - truncation < field.x_centers.front() - 1e-12 || x + truncation > field.x_centers.back() + 1e-12) {
        throw SupportError("pv_centered: x +- truncation leaves the grid");
    }
    const double l0 = field.final_at(x);
    auto g = [&](double z) {
        return std::pow(z, -exponent) * (field.final_at(x + z) + field.final_at(x - z) - 2.0 * l0);
    };
    PrincipalValueEstimate pv;
    pv.inner_cutoff = h;
    pv.truncation_radius = truncation;
    pv.exponent = exponent;
    pv.value = trapezoid(nodes(h, truncation, h), g);
    pv.value_half_cutoff = trapezoid(nodes(0.5 * h, truncation, h), g);
    pv.value_double_cutoff = trapezoid(nodes(2.0 * h, truncation, h), g);
    return pv;
}

PrincipalValueEstimate pv_symmetric(const LocalTimeField& field, double theta) {
    if (field.alpha && !(theta < 0.5 * (field.alpha->value() + 1.0))) {
        throw RegimeError("pv_symmetric requires theta < (alpha+1)/2");
    }
    const double R = std::min(-field.x_centers.front(), field.x_centers.back());
    const double h = field.spacing();
    if (!(R > 2.0 * h)) throw SupportError("pv_symmetric: grid must be symmetric about 0");
    auto g = [&](double z) { return std::pow(z, -theta) * (field.final_at(z) - field.final_at(-z)); };
    PrincipalValueEstimate pv;
    pv.inner_cutoff = h;
    pv.truncation_radius = R;
    pv.exponent = theta;
    pv.value = trapezoid(nodes(h, R, h), g);
    pv.value_half_cutoff = trapezoid(nodes(0.5 * h, R, h), g);
    pv.value_double_cutoff = trapezoid(nodes(2.0 * h, R, h), g);
    return pv;
}

std::optional<double> holder_probe(const LocalTimeField& field) {
    const std::size_t nx = field.x_centers.size(), nt = field.t_grid.size();
    if (nt == 0) return std::nullopt;
    std::vector<double> lx, ly;
    for (std::size_t lag = 1; lag <= 32 && lag < nx; lag *= 2) {
        double m = 0.0;
        for (std::size_t i = 0; i + lag < nx; ++i) m = std::max(m, std::abs(field.at(i + lag, nt - 1) - field.at(i, nt - 1)));
        if (m > 0.0) {
            lx.push_back(std::log(static_cast<double>(lag) * field.spacing()));
            ly.push_back(std::log(m));
        }
    }
    if (lx.size() < 2) return std::nullopt;
    const double n = static_cast<double>(lx.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t k = 0; k < lx.size(); ++k) {
        sx += lx[k];
        sy += ly[k];
        sxx += lx[k] * lx[k];
        sxy += lx[k] * ly[k];
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

double box_avg_abs_power(double a, double p, double eps) {
    if (p == -1.0 || !(p > -2.0)) throw RegimeError("box_avg_abs_power requires p > -2, p != -1");
    auto F = [p](double z) { return sign(z) * std::pow(std::abs(z), p + 1.0) / (p + 1.0); };
    return (F(a + eps) - F(a - eps)) / (2.0 * eps);
}

double box_avg_signed_power(double a, double p, double eps) {
    if (!(p > -2.0)) throw RegimeError("box_avg_signed_power requires p > -2");
    auto F = [p](double z) {
        if (p == -1.0) return std::log(std::abs(z));
        return std::pow(std::abs(z), p + 1.0) / (p + 1.0);
    };
    return (F(a + eps) - F(a - eps)) / (2.0 * eps);
}

void write_field_csv(std::ostream& os, const LocalTimeField& field) {
    os << 't';
    for (double x : field.x_centers) os << ',' << format_g17(x);
    os << '\n';
    for (std::size_t j = 0; j < field.t_grid.size(); ++j) {
        os << format_g17(field.t_grid[j]);
        for (std::size_t i = 0; i < field.x_centers.size(); ++i) os << ',' << format_g17(field.at(i, j));
        os << '\n';
    }
}

}  // namespace levy
