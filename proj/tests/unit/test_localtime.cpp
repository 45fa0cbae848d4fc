#include <algorithm>
#include <cmath>
#include <sstream>

#include "doctest.h"
#include "levy/error.hpp"
#include "levy/localtime.hpp"
#include "levy/parallel.hpp"

using namespace levy;

namespace {

SamplePath synthetic(std::vector<double> values, double t_end) {
    const std::size_t n = values.size() - 1;
    return SamplePath{Alpha(1.5), t_end, n, std::move(values), 0, {}};
}

LocalTimeField synthetic_field(const std::vector<double>& xs, const std::function<double(double)>& L) {
    LocalTimeField f;
    f.x_centers = xs;
    f.epsilon = 0.5 * (xs[1] - xs[0]);
    f.t_grid = {1.0};
    for (double x : xs) f.values.push_back(L(x));
    return f;
}

std::vector<double> uniform_grid(double lo, double hi, int n) {
    std::vector<double> xs(n);
    for (int i = 0; i < n; ++i) xs[i] = lo + (hi - lo) * i / (n - 1);
    return xs;
}

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    return v[v.size() / 2];
}

}  // namespace

TEST_CASE("deterministic paths") {
    std::vector<double> lin(1001);
    for (int k = 0; k <= 1000; ++k) lin[k] = k / 1000.0;
    auto p = synthetic(lin, 1.0);
    auto f = estimate_field(p, {0.5}, 0.01, {1.0});
    CHECK(f.at(0, 0) == doctest::Approx(1.0).epsilon(1e-12));

    auto z = synthetic(std::vector<double>(101, 0.0), 1.0);
    auto g = estimate_field(z, {-0.5, 0.3}, 0.1, {0.5, 1.0});
    for (double v : g.values) CHECK(v == 0.0);
    CHECK_THROWS_AS(estimate_field(z, {0.0}, 0.1, {0.505}), RegimeError);
    CHECK_THROWS_AS(estimate_field(z, {0.0}, 0.0, {1.0}), RegimeError);
}

TEST_CASE("field invariants on a stable path") {
    Alpha al(1.5);
    auto path = simulate_path(al, 1.0, 4096, SeedStream(5));
    auto xs = default_x_grid(al, 1.0);
    const double eps = 0.5 * (xs[1] - xs[0]);
    std::vector<double> ts;
    for (int j = 1; j <= 8; ++j) ts.push_back(j / 8.0);
    auto f = estimate_field(path, xs, eps, ts);
    for (std::size_t i = 0; i < xs.size(); ++i)
        for (std::size_t j = 0; j < ts.size(); ++j) {
            CHECK(f.at(i, j) >= 0.0);
            if (j) CHECK(f.at(i, j) >= f.at(i, j - 1));
        }
    const double lo = *std::min_element(path.values.begin(), path.values.end());
    const double hi = *std::max_element(path.values.begin(), path.values.end());
    if (lo > xs.front() && hi < xs.back()) {
        for (std::size_t j = 0; j < ts.size(); ++j) {
            double mass = 0.0;
            for (std::size_t i = 0; i < xs.size(); ++i) mass += 2.0 * eps * f.at(i, j);
            CHECK(mass <= ts[j] + 1e-12);
            CHECK(mass >= ts[j] - 2.0 * path.dt() - 1e-12);
        }
    }
    // dt = 2^-12 > eps^1.5 here? eps = 0.0236, eps^1.5 = 3.6e-3: no warning
    CHECK(f.warnings.empty());
    auto coarse = simulate_path(al, 1.0, 16, SeedStream(5));
    CHECK_FALSE(estimate_field(coarse, xs, eps, {1.0}).warnings.empty());
}

TEST_CASE("additivity") {
    Alpha al(1.5);
    auto path = simulate_path(al, 1.0, 1024, SeedStream(8));
    auto xs = default_x_grid(al, 1.0);
    const double eps = 0.5 * (xs[1] - xs[0]);
    auto whole = estimate_field(path, xs, eps, {1.0});
    auto head = estimate_field(path, xs, eps, {0.25});
    std::vector<double> tail(path.values.begin() + 256, path.values.end());
    SamplePath shifted{al, 0.75, 768, tail, 8, {}};
    auto rest = estimate_field(shifted, xs, eps, {0.75});
    for (std::size_t i = 0; i < xs.size(); ++i) {
        CHECK(whole.at(i, 0) == doctest::Approx(head.at(i, 0) + rest.at(i, 0)).epsilon(1e-12));
    }
}

TEST_CASE("occupation residual") {
    Alpha al(1.5);
    auto path = simulate_path(al, 1.0, 4096, SeedStream(12));
    auto xs = default_x_grid(al, 1.0);
    const double eps = 0.5 * (xs[1] - xs[0]);
    auto f = estimate_field(path, xs, eps, {1.0});
    const double c = xs[200];
    auto one_bin = [&](double x) { return (x >= c - eps && x < c + eps) ? 1.0 : 0.0; };
    CHECK(occupation_residual(path, f, one_bin) < 1e-12);
    auto two_bins = [&](double x) { return (x >= c - eps && x < c + 3 * eps) ? 1.0 : 0.0; };
    CHECK(occupation_residual(path, f, two_bins) < 1e-12);
    // smooth bump over 20 bins, Lipschitz constant 2/width
    const double width = 20 * 2 * eps;
    auto bump = [&](double x) {
        const double u = (x - c) / (0.5 * width);
        return std::abs(u) < 1 ? 0.5 * (1 + std::cos(M_PI * u)) : 0.0;
    };
    const double lip = M_PI / width;
    CHECK(occupation_residual(path, f, bump) <= 2 * path.dt() + lip * eps);
    auto wide = [](double) { return 1.0; };
    CHECK_THROWS_AS(occupation_residual(path, f, wide), SupportError);
}

TEST_CASE("principal values on synthetic fields") {
    auto xs = uniform_grid(-2.0, 2.0, 401);
    auto flat = synthetic_field(xs, [](double) { return 0.7; });
    CHECK(std::abs(pv_centered(flat, 0.0, 1.2, 1.5).value) < 1e-14);
    CHECK(std::abs(pv_symmetric(flat, 1.0).value) < 1e-14);

    auto tent = synthetic_field(xs, [](double x) { return std::max(0.0, 1.0 - std::abs(x)); });
    auto pv = pv_centered(tent, 0.0, 1.2, 1.5);
    // symmetric about 0: twice the one-sided trapezoid of z^{-1.2}(L(z) - L(0))
    double one_sided = 0.0;
    const double h = 0.01;
    for (int k = 1; k < 150; ++k) {
        auto g = [&](double z) { return std::pow(z, -1.2) * (tent.final_at(z) - tent.final_at(0.0)); };
        one_sided += 0.5 * h * (g(k * h) + g((k + 1) * h));
    }
    CHECK(pv.value == doctest::Approx(2.0 * one_sided).epsilon(1e-12));
    CHECK(pv.sensitivity() > 0.0);
    CHECK(std::abs(pv_symmetric(tent, 1.0).value) < 1e-14);

    auto odd = synthetic_field(uniform_grid(-1.0, 1.0, 201), [](double x) { return 1.0 + 0.5 * x; });
    auto ps = pv_symmetric(odd, 1.0);
    // L^z - L^{-z} = z on [0,1]: int_0^1 dz = 1; the left-out central bin costs one spacing
    CHECK(std::abs(ps.value - (1.0 - 0.01)) < 1e-12);
    CHECK(std::abs(ps.value_half_cutoff - 0.995) < 1e-12);
}

TEST_CASE("principal value regimes") {
    Alpha al(1.5);
    auto path = simulate_path(al, 1.0, 1024, SeedStream(1));
    auto xs = default_x_grid(al, 1.0);
    auto f = estimate_field(path, xs, 0.5 * (xs[1] - xs[0]), {1.0});
    CHECK_THROWS_AS(pv_centered(f, 0.0, 1.3, 1.0), RegimeError);
    CHECK_THROWS_AS(pv_centered(f, 0.0, 0.9, 1.0), RegimeError);
    CHECK_THROWS_AS(pv_centered(f, 3.0, 1.1, 1.5), SupportError);
    CHECK_THROWS_AS(pv_symmetric(f, 1.25), RegimeError);
    CHECK_NOTHROW(pv_symmetric(f, 1.0));
}

TEST_CASE("pv_symmetric has mean zero") {
    Alpha al(1.5);
    auto xs = default_x_grid(al, 1.0);
    const double eps = 0.5 * (xs[1] - xs[0]);
    SeedStream root(77);
    auto v = parallel_map<double>(10000, [&](std::size_t i) {
        auto p = simulate_path(al, 1.0, 1024, root.child(i));
        return pv_symmetric(estimate_field(p, xs, eps, {1.0}), 1.0).value;
    });
    auto s = sample_stats(v);
    CHECK(std::abs(s.mean) <= 4.0 * s.std_error);
}

TEST_CASE("holder probe") {
    auto xs = uniform_grid(-2.0, 2.0, 401);
    CHECK_FALSE(holder_probe(synthetic_field(xs, [](double) { return 0.3; })).has_value());
    auto s = holder_probe(synthetic_field(xs, [](double x) { return 1.0 - std::abs(x); }));
    REQUIRE(s);
    CHECK(*s == doctest::Approx(1.0).epsilon(1e-9));

    auto slopes = [](double a, std::uint64_t seed) {
        Alpha al(a);
        auto grid = default_x_grid(al, 1.0);
        const double eps = 0.5 * (grid[1] - grid[0]);
        std::vector<double> out;
        SeedStream root(seed);
        for (std::size_t i = 0; i < 100; ++i) {
            auto p = simulate_path(al, 1.0, 8192, root.child(i));
            auto h = holder_probe(estimate_field(p, grid, eps, {1.0}));
            if (h) out.push_back(*h);
        }
        return median(out);
    };
    CHECK(slopes(1.9, 3) > slopes(1.2, 4));
}

TEST_CASE("alpha = 2 local time mean") {
    Alpha al(2.0);
    const double eps = 1.0 / 32.0;
    SeedStream root(99);
    auto v = parallel_map<double>(10000, [&](std::size_t i) {
        auto p = simulate_path(al, 1.0, 4096, root.child(i));
        return estimate_field(p, {0.0}, eps, {1.0}).at(0, 0);
    });
    const double target = 2.0 * specfun::c0(al);
    CHECK(std::abs(sample_stats(v).mean - target) <= 0.05 * target);
}

TEST_CASE("refinement with common random numbers") {
    // finest path subsampled for the coarser levels
    Alpha al(1.5);
    const int levels = 4;
    SeedStream root(1234);
    auto per_path = parallel_map<std::vector<double>>(1000, [&](std::size_t i) {
        auto fine = simulate_path(al, 1.0, 1u << 13, root.child(i));
        std::vector<double> out;
        for (int l = 0; l < levels; ++l) {
            const std::size_t stride = 1u << (levels - 1 - l);
            std::vector<double> v;
            for (std::size_t k = 0; k < fine.values.size(); k += stride) v.push_back(fine.values[k]);
            SamplePath p{al, 1.0, v.size() - 1, v, 0, {}};
            const double eps = std::ldexp(1.0, -3 - l);
            out.push_back(estimate_field(p, {0.0}, eps, {1.0}).at(0, 0));
        }
        return out;
    });
    std::vector<double> mean(levels, 0.0);
    for (const auto& row : per_path)
        for (int l = 0; l < levels; ++l) mean[l] += row[l] / 1000.0;
    for (int l = 2; l < levels; ++l) {
        CHECK(std::abs(mean[l] - mean[l - 1]) < std::abs(mean[l - 1] - mean[l - 2]));
    }
}

TEST_CASE("box averages") {
    auto oracle = [](double a, double p, double eps, bool sgn) {
        const int n = 200000;
        double s = 0.0;
        for (int k = 0; k < n; ++k) {
            const double y = -eps + 2 * eps * (k + 0.5) / n;
            const double d = a - y;
            s += (sgn ? (d > 0 ? 1.0 : -1.0) : 1.0) * std::pow(std::abs(d), p);
        }
        return s / n;
    };
    for (double p : {0.5, 0.2, -0.5, -1.2, -1.0}) {
        for (double a : {0.3, -0.7, 2.0}) {
            if (p != -1.0) CHECK(box_avg_abs_power(a, p, 0.1) == doctest::Approx(oracle(a, p, 0.1, false)).epsilon(1e-7));
            CHECK(box_avg_signed_power(a, p, 0.1) == doctest::Approx(oracle(a, p, 0.1, true)).epsilon(1e-7));
        }
    }
    // inside the box: smooth exponents by the midpoint oracle, finite part by its definition
    CHECK(box_avg_abs_power(0.03, 0.5, 0.1) == doctest::Approx(oracle(0.03, 0.5, 0.1, false)).epsilon(1e-6));
    {
        const double a = 0.03, p = -1.4, eps = 0.1, d = 1e-4;
        // int_{|a-y|>d} |a-y|^p dy - 2 d^{p+1}/(-(p+1)), over the box
        auto F = [p](double z) { return std::pow(z, p + 1) / (p + 1); };
        const double outer = (F(a + eps) - F(d)) + (F(eps - a) - F(d));
        const double fp = outer + 2.0 * F(d);
        CHECK(box_avg_abs_power(a, p, eps) == doctest::Approx(fp / (2 * eps)).epsilon(1e-12));
    }
    CHECK_THROWS_AS(box_avg_abs_power(0.3, -1.0, 0.1), RegimeError);
}

TEST_CASE("field csv") {
    auto xs = uniform_grid(-1.0, 1.0, 5);
    auto f = synthetic_field(xs, [](double x) { return 1.0 - std::abs(x); });
    std::ostringstream os;
    write_field_csv(os, f);
    CHECK(os.str() == "t,-1,-0.5,0,0.5,1\n1,0,0.5,1,0.5,0\n");
}
