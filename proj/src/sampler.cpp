#include "levy/sampler.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>

#include "levy/error.hpp"
#include "levy/parallel.hpp"

namespace levy {
namespace {

constexpr double kPi = std::numbers::pi;

// N(0,1) from the alpha = 2 transform divided by sqrt(2)
double standard_normal(SeedStream& s) {
    const double v = kPi * (s.uniform() - 0.5);
    const double w = -std::log(s.uniform());
    return std::sqrt(2.0 * w) * std::sin(v);
}


VerificationReport bank_report(const std::string& name, Alpha alpha, std::size_t n,
                               const std::vector<double>& left, const std::vector<double>& right,
                               const std::vector<double>& orders) {
    VerificationReport rep;
    rep.identity = name;
    rep.alpha = alpha.value();
    rep.n_paths = n;
    double worst = -1.0;
    for (double k : orders) {
        std::vector<double> l(n), r(n);
        for (std::size_t i = 0; i < n; ++i) {
            l[i] = std::pow(std::abs(left[i]), k);
            r[i] = std::pow(std::abs(right[i]), k);
        }
        const SampleStats sl = sample_stats(l);
        const SampleStats sr = sample_stats(r);
        const double se = std::hypot(sl.std_error, sr.std_error);
        const double z = std::abs(sl.mean - sr.mean) / se;
        char key[64];
        std::snprintf(key, sizeof key, "order_%g_z", k);
        rep.diagnostics[key] = z;
        if (z > worst) {
            worst = z;
            rep.mc_estimate = sl.mean;
            rep.analytic_target = sr.mean;
            rep.std_error = se;
            rep.diagnostics["worst_order"] = k;
        }
    }
    return rep.finalize();
}

}  // namespace

double stable_variate(Alpha alpha, SeedStream& stream) {
    const double a = alpha.value();
    const double v = kPi * (stream.uniform() - 0.5);
    const double w = -std::log(stream.uniform());
    if (alpha.is_brownian()) return 2.0 * std::sin(v) * std::sqrt(w);
    return std::sin(a * v) / std::pow(std::cos(v), 1.0 / a) *
           std::pow(std::cos((1.0 - a) * v) / w, (1.0 - a) / a);
}

double positive_stable_variate(double beta, SeedStream& stream) {
    if (!(beta > 0.5 && beta < 1.0)) {
        throw RegimeError("positive_stable_variate requires 1/2 < beta < 1");
    }
    const double u = kPi * stream.uniform();
    const double w = -std::log(stream.uniform());
    return std::sin(beta * u) / std::pow(std::sin(u), 1.0 / beta) *
           std::pow(std::sin((1.0 - beta) * u) / w, (1.0 - beta) / beta);
}

void fill_path(Alpha alpha, double t_end, std::size_t n_steps, SeedStream stream,
               std::vector<double>& values) {
    if (!(t_end > 0.0)) throw RegimeError("simulate_path requires t_end > 0");
    if (n_steps < 1) throw RegimeError("simulate_path requires n_steps >= 1");
    values.resize(n_steps + 1);
    const double scale = std::pow(t_end / static_cast<double>(n_steps), 1.0 / alpha.value());
    double x = 0.0;
    values[0] = 0.0;
    for (std::size_t k = 1; k <= n_steps; ++k) {
        x += scale * stable_variate(alpha, stream);
        values[k] = x;
    }
}

SamplePath simulate_path(Alpha alpha, double t_end, std::size_t n_steps, SeedStream stream) {
    SamplePath p{alpha, t_end, n_steps, {}, stream.seed(), stream.path()};
    fill_path(alpha, t_end, n_steps, std::move(stream), p.values);
    return p;
}

std::pair<VerificationReport, VerificationReport> identity_checks(Alpha alpha, std::size_t n,
                                                                  const SeedStream& stream) {
    if (n < 10000) throw RegimeError("identity_checks requires n >= 1e4");
    const double a = alpha.value();
    if (alpha.is_brownian()) {
        VerificationReport r1, r2;
        r1.identity = "identity_exp_ratio";
        r2.identity = "identity_gaussian_mixture";
        for (auto* r : {&r1, &r2}) {
            r->alpha = a;
            r->n_paths = n;
            r->diagnostics["skip"] = std::string("boundary-skip");
            r->finalize();
        }
        return {r1, r2};
    }
    const double beta = 0.5 * a;
    struct Draw {
        double ratio, z, x, mix;
    };
    auto draws = parallel_map<Draw>(n, [&](std::size_t i) {
        SeedStream s = stream.child(i);
        Draw d;
        const double z = -std::log(s.uniform());
        d.ratio = std::pow(z / positive_stable_variate(beta, s), beta);
        d.z = -std::log(s.uniform());
        d.x = stable_variate(alpha, s);
        d.mix = std::sqrt(2.0) * standard_normal(s) * std::sqrt(positive_stable_variate(beta, s));
        return d;
    });
    std::vector<double> ratio(n), z(n), x(n), mix(n);
    for (std::size_t i = 0; i < n; ++i) {
        ratio[i] = draws[i].ratio;
        z[i] = draws[i].z;
        x[i] = draws[i].x;
        mix[i] = draws[i].mix;
    }
    std::vector<double> all{0.25, 0.5, 1.0};
    std::vector<double> finite;
    for (double k : all)
        if (2.0 * k < a) finite.push_back(k);
    return {bank_report("identity_exp_ratio", alpha, n, ratio, z, all),
            bank_report("identity_gaussian_mixture", alpha, n, x, mix, finite)};
}

std::string format_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_path_csv(std::ostream& os, const SamplePath& path) {
    os << "t,x\n";
    for (std::size_t k = 0; k < path.values.size(); ++k) {
        os << format_g17(path.time(k)) << ',' << format_g17(path.values[k]) << '\n';
    }
}

}  // namespace levy
