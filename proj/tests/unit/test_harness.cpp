#include <cmath>
#include <cstdlib>
#include <numbers>
#include <string>

#include "doctest.h"
#include "levy/error.hpp"
#include "levy/harness.hpp"
#include "levy/localtime.hpp"

using namespace levy;

namespace {

CheckConfig small(std::size_t paths = 2000, std::size_t steps = 1u << 11) {
    CheckConfig c;
    c.n_paths = paths;
    c.n_steps = steps;
    c.epsilon = 1.0 / 16.0;
    c.seed = 7;
    return c;
}

CheckConfig faulty(CheckConfig c, double scale) {
    c.fault_scale = scale;
    return c;
}

bool gate(const VerificationReport& r, const std::string& key) {
    return std::get<double>(r.diagnostics.at(key)) == 1.0;
}

struct ThreadsEnv {
    std::string saved;
    bool had = false;
    explicit ThreadsEnv(const char* value) {
        if (const char* v = std::getenv("LEVY_THREADS")) {
            saved = v;
            had = true;
        }
        setenv("LEVY_THREADS", value, 1);
    }
    ~ThreadsEnv() {
        if (had) setenv("LEVY_THREADS", saved.c_str(), 1);
        else unsetenv("LEVY_THREADS");
    }
};

}  // namespace

TEST_CASE("check config validation") {
    CheckConfig c;
    CHECK_NOTHROW(c.validate());
    c.n_paths = 0;
    CHECK_THROWS_AS(c.validate(), RegimeError);
    c = CheckConfig{};
    c.n_steps = 1001;
    CHECK_THROWS_AS(c.validate(), RegimeError);
    c = CheckConfig{};
    c.epsilon = 0.0;
    CHECK_THROWS_AS(c.validate(), RegimeError);
    c = CheckConfig{};
    c.t = -1.0;
    CHECK_THROWS_AS(c.validate(), RegimeError);
    // dt > eps^alpha
    c = small(10, 16);
    c.epsilon = 0.01;
    CHECK_THROWS_AS(tanaka_check(Alpha(1.5), 0.0, c), RegimeError);
}

TEST_CASE("martingale probe") {
    const std::vector<double> constant(500, 3.0);
    std::vector<double> g1(500), g2(500);
    for (int i = 0; i < 500; ++i) {
        g1[i] = (i % 3) - 1.0;
        g2[i] = std::sin(i);
    }
    auto p = martingale_probe(constant, constant, 0.5, 1.0, {{"a", g1}, {"b", g2}});
    CHECK(p.covariances == std::vector<double>{0.0, 0.0});
    CHECK(p.std_errors == std::vector<double>{0.0, 0.0});
    CHECK(p.pass());

    std::vector<double> ns(500), nt(500);
    for (int i = 0; i < 500; ++i) {
        ns[i] = std::cos(i);
        nt[i] = ns[i] + std::sin(3.0 * i);
    }
    auto ab = martingale_probe(ns, nt, 0.5, 1.0, {{"a", g1}, {"b", g2}});
    auto ba = martingale_probe(ns, nt, 0.5, 1.0, {{"b", g2}, {"a", g1}});
    CHECK(ab.covariances[0] == ba.covariances[1]);
    CHECK(ab.covariances[1] == ba.covariances[0]);
    CHECK(ab.std_errors[0] == ba.std_errors[1]);
    for (double se : ab.std_errors) CHECK(std::isfinite(se));

    // increments equal to the functional cannot pass
    std::vector<double> bad(500);
    for (int i = 0; i < 500; ++i) bad[i] = ns[i] + g1[i];
    CHECK_FALSE(martingale_probe(ns, bad, 0.5, 1.0, {{"a", g1}}).pass());
    CHECK_THROWS_AS(martingale_probe(ns, nt, 1.0, 1.0, {}), RegimeError);
}

TEST_CASE("jump compensator") {
    const Alpha alpha(1.5);
    const double g = 0.5;
    JumpCompensator h(alpha, 0.5, [g](double u, double z) { return std::pow(std::abs(u + z), g) - std::pow(u, g); },
                      g, g);
    // y = 0: 2 c5 K^{g-a} / (a-g)
    const double at0 = 2.0 * specfun::c5(alpha) * std::pow(0.5, g - 1.5) / (1.5 - g);
    CHECK(h(0.0) == doctest::Approx(at0).epsilon(1e-9));
    for (double y : {1e-5, 0.01, 0.3, 0.4999, 0.5, 0.7, 3.0, 80.0, 4e4, -2.0}) {
        CAPTURE(y);
        // interpolation across the kink at |y| = K costs a few 1e-5
        CHECK(h(y) == doctest::Approx(h.direct(y)).epsilon(1e-4));
        CHECK(h(y) == h(-y));
    }
    CHECK(h(2e6) == h.direct(2e6));
    CHECK_THROWS_AS(JumpCompensator(alpha, 0.5, [](double, double) { return 0.0; }, 1.6, 0.0), RegimeError);

    // sum of big jumps minus the compensator has mean zero
    CheckConfig c = small(4000, 1u << 10);
    const double dt = c.dt();
    std::vector<double> vals(c.n_paths);
    for (std::size_t i = 0; i < c.n_paths; ++i) {
        std::vector<double> v;
        fill_path(alpha, 1.0, c.n_steps, SeedStream(11).child(i), v);
        double big = 0.0, comp = 0.0;
        for (std::size_t k = 0; k < c.n_steps; ++k) {
            comp += h(v[k]);
            if (std::abs(v[k + 1] - v[k]) > 0.5) big += std::pow(std::abs(v[k + 1]), g) - std::pow(std::abs(v[k]), g);
        }
        vals[i] = big - dt * comp;
    }
    const SampleStats st = sample_stats(vals);
    CHECK(std::abs(st.mean) <= 4.0 * st.std_error);
}

TEST_CASE("tanaka check") {
    const Alpha alpha(1.5);
    auto r = tanaka_check(alpha, 0.0, small());
    CHECK(r.pass);
    CHECK(r.recompute_pass());
    CHECK(r.identity == "tanaka");
    CHECK(r.std_error > 0.0);
    CHECK(gate(r, "gate_probe_sign"));

    SUBCASE("far level") {
        auto far = tanaka_check(alpha, 25.0, small());
        CHECK(far.pass);
        CHECK(std::get<double>(far.diagnostics.at("mean_local_time")) < 1e-3);
    }
    SUBCASE("t = 0") {
        CheckConfig c = small();
        c.t = 0.0;
        auto z = tanaka_check(alpha, 0.0, c);
        CHECK(z.pass);
        CHECK(z.mc_estimate == 0.0);
    }
    SUBCASE("fault injection") {
        auto bad = tanaka_check(alpha, 0.0, faulty(small(), 1.2));
        CHECK_FALSE(bad.pass);
        CHECK_FALSE(bad.recompute_pass());
    }
    SUBCASE("Brownian reference") {
        // |sqrt2 B_t| = N + 2 L^0_t
        CHECK(tanaka_check(Alpha(2.0), 0.0, small()).pass);
    }
}

TEST_CASE("reruns are bit-identical across worker counts") {
    const CheckConfig c = small(600, 1u << 10);
    std::string one, four;
    {
        ThreadsEnv env("1");
        one = tanaka_check(Alpha(1.5), 0.2, c).to_json().dump();
    }
    {
        ThreadsEnv env("4");
        four = tanaka_check(Alpha(1.5), 0.2, c).to_json().dump();
    }
    CHECK(one == four);
    CHECK(one == tanaka_check(Alpha(1.5), 0.2, c).to_json().dump());
}

TEST_CASE("bracket check") {
    auto r = bracket_check(Alpha(1.5), 0.0, small());
    CHECK(r.pass);
    const double ratio = std::get<double>(r.diagnostics.at("ratio"));
    CHECK(ratio > 0.9);
    CHECK(ratio < 1.1);
    CHECK(r.diagnostics.count("cap_level") == 1);
    CHECK_FALSE(bracket_check(Alpha(1.5), 0.0, faulty(small(), 1.2)).pass);

    auto far = bracket_check(Alpha(1.5), 25.0, small());
    CHECK(far.pass);

    auto b = bracket_check(Alpha(2.0), 0.0, small());
    CHECK(b.skipped());
    CHECK(b.pass);
    CHECK(std::get<std::string>(b.diagnostics.at("skip")) == "boundary-skip");
}

TEST_CASE("moment scaling check") {
    auto r = moment_scaling_check(Alpha(1.5), 0.7, 2.0, 100000, 3);
    CHECK(r.pass);
    CHECK(r.analytic_target == doctest::Approx(std::pow(2.0, 0.7 / 1.5) * specfun::moment_m(Alpha(1.5), 0.7)));

    auto zero = moment_scaling_check(Alpha(1.5), 0.0, 1.0, 1000, 3);
    CHECK(zero.mc_estimate == 1.0);
    CHECK(zero.analytic_target == 1.0);
    CHECK(zero.pass);

    auto gauss = moment_scaling_check(Alpha(2.0), 1.0, 1.0, 100000, 3);
    CHECK(gauss.analytic_target == doctest::Approx(2.0 / std::sqrt(std::numbers::pi)).epsilon(1e-13));
    CHECK(gauss.pass);

    CHECK_THROWS_AS(moment_scaling_check(Alpha(1.5), 1.5, 1.0, 100, 3), RegimeError);
    CHECK_THROWS_AS(moment_scaling_check(Alpha(1.5), -0.1, 1.0, 100, 3), RegimeError);
}

TEST_CASE("submartingale decomposition check") {
    const Alpha alpha(1.5);
    auto r = submartingale_decomposition_check(alpha, 1.2, 0.0, small());
    CHECK(r.pass);
    CHECK(gate(r, "gate_analytic"));
    CHECK(std::get<double>(r.diagnostics.at("analytic_rel_gap")) <= 1e-12);
    CHECK_FALSE(submartingale_decomposition_check(alpha, 1.2, 0.0, faulty(small(), 1.2)).pass);

    SUBCASE("short horizon") {
        CheckConfig c = small();
        c.t = 1e-3;
        c.epsilon = 1e-3;
        auto s = submartingale_decomposition_check(alpha, 1.2, 0.0, c);
        const double bound = 10.0 * std::pow(1e-3, 1.2 / 1.5);
        CHECK(std::abs(s.mc_estimate) < bound);
        CHECK(std::abs(s.analytic_target) < bound);
        CHECK(s.pass);
    }
    SUBCASE("near the upper end of the regime") {
        auto s = submartingale_decomposition_check(alpha, 1.49, 0.0, small());
        CHECK(s.pass);
    }
    SUBCASE("off-centre level") { CHECK(submartingale_decomposition_check(alpha, 0.8, 0.5, small()).pass); }
    CHECK_THROWS_AS(submartingale_decomposition_check(alpha, 0.4, 0.0, small()), RegimeError);
}

TEST_CASE("dirichlet decomposition check") {
    const Alpha alpha(1.6);
    auto r = dirichlet_decomposition_check(alpha, 0.45, 0.0, small(1000));
    CHECK(r.tolerance_multiple == 5.0);
    CHECK(r.pass);
    CHECK(gate(r, "gate_zero_qv"));
    CHECK(gate(r, "gate_divergence"));
    CHECK(std::get<double>(r.diagnostics.at("c4")) ==
          doctest::Approx(specfun::c4_from_moments(alpha, 0.45)).epsilon(1e-7));
    CHECK_FALSE(dirichlet_decomposition_check(alpha, 0.45, 0.0, faulty(small(1000), 1.5)).pass);

    CHECK_THROWS_AS(dirichlet_decomposition_check(alpha, 0.7, 0.0, small()), RegimeError);
    CHECK(dirichlet_decomposition_check(Alpha(2.0), 0.5, 0.0, small()).skipped());
    CheckConfig odd = small(100, 1001);
    CHECK_THROWS_AS(dirichlet_decomposition_check(alpha, 0.45, 0.0, odd), RegimeError);

    SUBCASE("constant field has no p.v. part") {
        LocalTimeField f;
        for (int i = 0; i <= 200; ++i) f.x_centers.push_back((i - 100) * 0.02);
        f.epsilon = 0.01;
        f.t_grid = {1.0};
        f.values.assign(f.x_centers.size(), 0.7);
        f.alpha = alpha;
        CHECK(pv_centered(f, 0.0, 1.6 - 0.45, 1.5).value == 0.0);
    }
}

TEST_CASE("symmetric power check") {
    const Alpha alpha(1.5);
    auto r = symmetric_power_check(alpha, 0.5, small(4000, 1u << 10));
    CHECK(r.pass);
    CHECK(gate(r, "gate_probe_sign"));
    CHECK(gate(r, "gate_probe_min"));
    CHECK(std::get<double>(r.diagnostics.at("q")) == doctest::Approx(-std::numbers::pi).epsilon(1e-8));
    CHECK(std::holds_alternative<std::string>(r.diagnostics.at("bracket_candidate_alpha_minus_gamma")));
    CHECK(std::get<double>(r.diagnostics.at("bracket_candidate_gamma")) > 0.0);

    auto bad = symmetric_power_check(alpha, 0.5, faulty(small(4000, 1u << 10), 2.0));
    CHECK_FALSE(bad.pass);
    CHECK_FALSE(gate(bad, "gate_probe_sign"));

    CHECK(symmetric_power_check(Alpha(2.0), 0.5, small()).skipped());
    CHECK_THROWS_AS(symmetric_power_check(alpha, 0.2, small()), RegimeError);

    SUBCASE("symmetric field, X_t = 0") {
        LocalTimeField f;
        for (int i = 0; i <= 200; ++i) f.x_centers.push_back((i - 100) * 0.02);
        f.epsilon = 0.01;
        f.t_grid = {1.0};
        for (double x : f.x_centers) f.values.push_back(std::exp(-x * x));
        const double q = -std::numbers::pi;
        const double n = q * 0.0 - specfun::c1(alpha) * pv_symmetric(f, 1.0).value;
        CHECK(n == 0.0);
    }
}

TEST_CASE("ito-tanaka check") {
    const Alpha alpha(1.5);
    CheckConfig c = small();

    StepFunction zero = StepFunction::hat(1.0 / 16.0);
    std::fill(zero.weights.begin(), zero.weights.end(), 0.0);
    auto z = ito_tanaka_check(alpha, zero, c);
    CHECK(z.mc_estimate == 0.0);
    CHECK(z.std_error == 0.0);
    CHECK(z.pass);

    // one bin of half-width eps at x: the residual is 2 eps times the Tanaka residual
    const double x = 0.3;
    StepFunction bin{{x - 2.0 * c.epsilon, x, x + 2.0 * c.epsilon}, c.epsilon, {0.0, 1.0, 0.0}};
    auto one = ito_tanaka_check(alpha, bin, c);
    auto tan = tanaka_check(alpha, x, c);
    CHECK(one.mc_estimate == doctest::Approx(2.0 * c.epsilon * tan.mc_estimate).epsilon(1e-9));
    CHECK(one.std_error == doctest::Approx(2.0 * c.epsilon * tan.std_error).epsilon(1e-9));

    auto hat = ito_tanaka_check(alpha, StepFunction::hat(1.0 / 64.0), c);
    CHECK(hat.pass);
    CHECK_FALSE(ito_tanaka_check(alpha, StepFunction::hat(1.0 / 64.0), faulty(c, 1.2)).pass);

    StepFunction open{{-0.1, 0.1}, 0.1, {1.0, 0.0}};
    CHECK_THROWS_AS(ito_tanaka_check(alpha, open, c), SupportError);
}

TEST_CASE("step function") {
    auto f = StepFunction::hat(0.125);
    CHECK(f.weights.front() == 0.0);
    CHECK(f.weights.back() == 0.0);
    CHECK(f(0.0) == 1.0);
    CHECK(f(0.26) == doctest::Approx(0.75));
    CHECK(f(5.0) == 0.0);
    // int f(y)|a - y|^p dy against a midpoint sum
    const double a = 0.37, p = 0.5;
    double ref = 0.0;
    const int n = 400000;
    for (int i = 0; i < n; ++i) {
        const double y = -2.0 + 4.0 * (i + 0.5) / n;
        ref += f(y) * std::pow(std::abs(a - y), p) * 4.0 / n;
    }
    CHECK(f.convolve_abs_power(a, p) == doctest::Approx(ref).epsilon(1e-6));
}

TEST_CASE("local time mean check") {
    const Alpha alpha(1.5);
    CheckConfig c = small(2000, 1u << 12);
    auto r = local_time_mean_check(alpha, c);
    CHECK(r.pass);
    CHECK(gate(r, "gate_refinement"));
    CHECK(r.analytic_target == doctest::Approx(3.0 * specfun::c0(alpha)).epsilon(1e-14));
    CHECK(std::get<double>(r.diagnostics.at("relative_tolerance")) == 0.1);
    CHECK_FALSE(local_time_mean_check(alpha, faulty(c, 1.2)).pass);

    CheckConfig zero = c;
    zero.t = 0.0;
    auto z = local_time_mean_check(alpha, zero);
    CHECK(z.mc_estimate == 0.0);
    CHECK(z.pass);
}

TEST_CASE("run_check by name") {
    SuiteParams p;
    p.cfg = small(200, 1u << 8);
    p.cfg.epsilon = 0.125;
    CHECK(check_names().size() == 9);
    for (const auto& name : {"tanaka", "ito_tanaka"}) {
        auto reports = run_check(name, p);
        REQUIRE(reports.size() == 1);
        CHECK(reports[0].identity == name);
    }
    p.cfg.n_paths = 10000;
    CHECK(run_check("identity", p).size() == 2);
    CHECK_THROWS_AS(run_check("nope", p), UnknownNameError);
}
