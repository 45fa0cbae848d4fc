#include "levy/cli.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "levy/analysis.hpp"
#include "levy/error.hpp"
#include "levy/harness.hpp"
#include "levy/parallel.hpp"

namespace levy {
namespace {

using nlohmann::ordered_json;
using specfun::ConstantName;

// thrown for bad input that is not a levy::Error (unknown format, I/O)
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

ordered_json opt_json(const std::optional<double>& v) { return v ? ordered_json(*v) : ordered_json(nullptr); }

std::string opt_csv(const std::optional<double>& v) { return v ? format_g17(*v) : std::string(); }

// Writes to `path`, or to `out` when path is empty.
void emit(const std::string& text, const std::string& path, std::ostream& out) {
    if (path.empty()) {
        out << text;
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw UsageError("cannot open " + path + " for writing");
    f << text;
    if (!f) throw UsageError("write to " + path + " failed");
}

// ---------------------------------------------------------------- constants

struct ConstRow {
    std::string name;
    double alpha = 0.0;
    std::optional<double> gamma_used;
    std::optional<double> closed_form;
    std::optional<double> integral_rep;
    std::optional<double> rel_gap;
    std::string status;
};

ConstRow constant_row(ConstantName name, Alpha alpha, std::optional<double> gamma, double tol) {
    ConstRow row;
    row.name = std::string(specfun::to_string(name));
    row.alpha = alpha.value();
    try {
        std::optional<double> g;
        if (specfun::depends_on_gamma(name)) {
            const auto regime = specfun::gamma_regime(name, alpha);
            g = (gamma && regime.contains(*gamma)) ? *gamma : regime.midpoint();
        }
        row.gamma_used = g;
        switch (name) {
            case ConstantName::c4: {
                const double r = constant_integral(IntegralName::r, alpha, g);
                row.closed_form = specfun::constant_closed_form(name, alpha, g, r);
                break;
            }
            case ConstantName::r:
                // r implied by the moment expression of c4
                row.closed_form = specfun::c1(alpha) / specfun::c4_from_moments(alpha, *g);
                break;
            case ConstantName::q:
                break;
            default:
                row.closed_form = specfun::constant_closed_form(name, alpha, g);
        }
        row.integral_rep = integral_value(name, alpha, g);
        if (row.closed_form && row.integral_rep) {
            row.rel_gap = std::abs(*row.closed_form - *row.integral_rep) / std::abs(*row.closed_form);
            row.status = *row.rel_gap <= tol ? "ok" : "fail";
        } else if (alpha.is_brownian()) {
            row.status = "boundary-skip";
        } else {
            row.status = row.closed_form ? "closed-only" : "integral-only";
        }
    } catch (const DegenerateAlphaError&) {
        row.closed_form.reset();
        row.integral_rep.reset();
        row.rel_gap.reset();
        row.status = "boundary-skip";
    }
    return row;
}

int cmd_constants(const std::vector<double>& alphas, const std::vector<double>& gammas, double tol,
                  const std::string& format, const std::string& out_path, std::ostream& out) {
    std::vector<ConstRow> rows;
    std::vector<std::optional<double>> gs;
    for (double g : gammas) gs.emplace_back(g);
    if (gs.empty()) gs.emplace_back(std::nullopt);
    for (double a : alphas) {
        const Alpha alpha(a);
        for (const auto& g : gs) {
            for (ConstantName name : specfun::kAllConstants) rows.push_back(constant_row(name, alpha, g, tol));
        }
    }
    std::ostringstream text;
    if (format == "csv") {
        text << "name,alpha,gamma_used,closed_form,integral_rep,rel_gap,status\n";
        for (const auto& r : rows) {
            text << r.name << ',' << format_g17(r.alpha) << ',' << opt_csv(r.gamma_used) << ','
                 << opt_csv(r.closed_form) << ',' << opt_csv(r.integral_rep) << ',' << opt_csv(r.rel_gap) << ','
                 << r.status << '\n';
        }
    } else {
        ordered_json arr = ordered_json::array();
        for (const auto& r : rows) {
            arr.push_back({{"name", r.name},
                           {"alpha", r.alpha},
                           {"gamma_used", opt_json(r.gamma_used)},
                           {"closed_form", opt_json(r.closed_form)},
                           {"integral_rep", opt_json(r.integral_rep)},
                           {"rel_gap", opt_json(r.rel_gap)},
                           {"status", r.status}});
        }
        text << arr.dump(2) << '\n';
    }
    emit(text.str(), out_path, out);
    for (const auto& r : rows) {
        if (r.status == "fail") return 1;
    }
    return 0;
}

// ---------------------------------------------------------------- resolvent

int cmd_resolvent(const std::string& model_name, double a, const std::vector<double>& ps,
                  const std::vector<double>& xs, const std::string& format, const std::string& out_path,
                  std::ostream& out) {
    const LevyModel model = model_name == "brownian" ? LevyModel::brownian() : LevyModel::stable(Alpha(a));
    for (double p : ps) {
        if (!(p > 0.0)) throw RegimeError("p must be positive");
    }
    std::ostringstream text;
    ordered_json arr = ordered_json::array();
    if (format == "csv") text << "model,alpha,p,x,u,v\n";
    for (double p : ps) {
        for (double x : xs) {
            const double u = resolvent_u(model, p, x);
            const double v = x == 0.0 ? 0.0 : v_potential(model, x);
            const std::optional<double> al = model.alpha() ? std::optional<double>(model.alpha()->value()) : std::nullopt;
            if (format == "csv") {
                text << model_name << ',' << opt_csv(al) << ',' << format_g17(p) << ',' << format_g17(x) << ','
                     << format_g17(u) << ',' << format_g17(v) << '\n';
            } else {
                arr.push_back({{"model", model_name}, {"alpha", opt_json(al)}, {"p", p}, {"x", x}, {"u", u}, {"v", v}});
            }
        }
    }
    if (format != "csv") text << arr.dump(2) << '\n';
    emit(text.str(), out_path, out);
    return 0;
}

// ---------------------------------------------------------------- simulate

std::string numbered_path(const std::string& path, std::size_t i) {
    const std::filesystem::path p(path);
    std::filesystem::path q = p.parent_path() / (p.stem().string() + "_" + std::to_string(i) + p.extension().string());
    return q.string();
}

int cmd_simulate(double a, double t, std::size_t n_paths, std::size_t n_steps, std::uint64_t seed, double gamma,
                 std::size_t dump, const std::string& out_path, std::ostream& out) {
    const Alpha alpha(a);
    if (n_paths < 1) throw RegimeError("paths must be at least 1");
    if (n_steps < 1) throw RegimeError("steps must be at least 1");
    if (!(t > 0.0)) throw RegimeError("t must be positive");
    if (!(gamma >= 0.0 && gamma < a)) throw RegimeError("moment order must lie in [0, alpha)");
    auto stream = [&](std::size_t i) { return SeedStream(seed).child(0).child(i); };

    if (!out_path.empty()) {
        const std::size_t n_dump = std::min(dump, n_paths);
        for (std::size_t i = 0; i < n_dump; ++i) {
            const SamplePath path = simulate_path(alpha, t, n_steps, stream(i));
            std::ostringstream csv;
            write_path_csv(csv, path);
            emit(csv.str(), n_dump == 1 ? out_path : numbered_path(out_path, i), out);
        }
    }
    auto values = parallel_map<double>(n_paths, [&](std::size_t i) {
        std::vector<double> v;
        fill_path(alpha, t, n_steps, stream(i), v);
        return std::pow(std::abs(v.back()), gamma);
    });
    const SampleStats st = sample_stats(values);
    const double target = std::pow(t, gamma / a) * specfun::moment_m(alpha, gamma);
    ordered_json summary = {{"alpha", a},
                            {"t", t},
                            {"n_paths", n_paths},
                            {"n_steps", n_steps},
                            {"seed", seed},
                            {"moment_order", gamma},
                            {"moment_estimate", st.mean},
                            {"std_error", st.std_error},
                            {"moment_target", target}};
    out << summary.dump(2) << '\n';
    return 0;
}

// ---------------------------------------------------------------- verify

int cmd_verify(const std::vector<double>& alphas, SuiteParams params, std::vector<std::string> checks,
               const std::string& format, const std::string& out_path, std::ostream& out, std::ostream& err) {
    if (checks.empty()) checks = check_names();
    for (const auto& c : checks) {
        if (std::find(check_names().begin(), check_names().end(), c) == check_names().end()) {
            throw UnknownNameError("unknown check: " + c);
        }
    }
    params.cfg.validate();
    std::vector<VerificationReport> reports;
    for (double a : alphas) {
        params.alpha = Alpha(a);
        for (const auto& c : checks) {
            for (auto& r : run_check(c, params)) {
                err << report_line(r) << '\n';
                reports.push_back(std::move(r));
            }
        }
    }
    std::ostringstream text;
    if (format == "csv") {
        text << "identity,alpha,gamma,x_level,n_paths,mc_estimate,analytic_target,std_error,tolerance_multiple,pass\n";
        for (const auto& r : reports) {
            text << r.identity << ',' << format_g17(r.alpha) << ',' << opt_csv(r.gamma) << ',' << opt_csv(r.x_level)
                 << ',' << r.n_paths << ',' << format_g17(r.mc_estimate) << ',' << format_g17(r.analytic_target)
                 << ',' << format_g17(r.std_error) << ',' << format_g17(r.tolerance_multiple) << ','
                 << (r.pass ? "true" : "false") << '\n';
        }
    } else {
        ordered_json arr = ordered_json::array();
        for (const auto& r : reports) arr.push_back(r.to_json());
        text << arr.dump(2) << '\n';
    }
    emit(text.str(), out_path, out);
    for (const auto& r : reports) {
        if (!r.pass) return 1;
    }
    return 0;
}

// Fills options of `sub` that were not given on the command line from a flat key = value file.
void apply_config(CLI::App& sub, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot read config file " + path);
    CLI::ConfigINI ini;
    for (const CLI::ConfigItem& item : ini.from_config(in)) {
        if (item.name == "++" || item.name == "--" || !item.parents.empty()) {
            throw UsageError("config file must be flat key = value lines");
        }
        CLI::Option* opt = sub.get_option_no_throw("--" + item.name);
        if (opt == nullptr || item.name == "config") throw UsageError("unknown config key: " + item.name);
        if (opt->count() > 0) continue;
        opt->add_result(item.inputs);
        opt->run_callback();
    }
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Symmetric stable processes: constants, resolvents, path simulation and Monte Carlo checks"};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all");

    std::string format = "json";
    std::string out_path;
    std::string config_path;
    auto common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "flat key = value file; command-line flags win");
        sub->add_option("--format", format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
        sub->add_option("--out", out_path, "output file (default stdout)");
    };

    // constants
    std::vector<double> c_alpha{1.5};
    std::vector<double> c_gamma;
    double c_tol = 1e-4;
    auto* constants = app.add_subcommand("constants", "constant table: closed forms against integral representations");
    common(constants);
    constants->add_option("--alpha", c_alpha, "alpha values")->delimiter(',');
    constants->add_option("--gamma", c_gamma, "gamma values (rows outside a regime use its midpoint)")->delimiter(',');
    constants->add_option("--tol", c_tol, "relative gap tolerance");

    // resolvent
    std::string r_model = "stable";
    double r_alpha = 1.5;
    std::vector<double> r_p{1.0};
    std::vector<double> r_x{0.0, 1.0};
    auto* resolvent = app.add_subcommand("resolvent", "resolvent density u^(p)(x) and potential difference v(x)");
    common(resolvent);
    resolvent->add_option("--model", r_model, "stable or brownian")->check(CLI::IsMember({"stable", "brownian"}));
    resolvent->add_option("--alpha", r_alpha, "stability index");
    resolvent->add_option("--p", r_p, "p values")->delimiter(',');
    resolvent->add_option("--x", r_x, "x values")->delimiter(',');

    // simulate
    double s_alpha = 1.5, s_t = 1.0, s_gamma = 0.5;
    std::size_t s_paths = 1, s_steps = 1024, s_dump = 1;
    std::uint64_t s_seed = 0;
    auto* simulate = app.add_subcommand("simulate", "simulate paths, write CSV, print a moment summary");
    common(simulate);
    simulate->add_option("--alpha", s_alpha, "stability index");
    simulate->add_option("--t", s_t, "horizon");
    simulate->add_option("--paths", s_paths, "number of paths");
    simulate->add_option("--steps", s_steps, "steps per path");
    simulate->add_option("--seed", s_seed, "seed (required)");
    simulate->add_option("--gamma", s_gamma, "order of the summary moment E|X_t|^gamma");
    simulate->add_option("--dump", s_dump, "number of paths written to CSV");

    // verify
    std::vector<double> v_alpha{1.5};
    std::optional<double> v_gamma, v_x, v_tol;
    std::vector<std::string> v_checks;
    bool v_fault = false;
    double v_fault_scale = 1.2;
    CheckConfig cfg;
    auto* verify = app.add_subcommand("verify", "run Monte Carlo checks");
    common(verify);
    verify->add_option("--alpha", v_alpha, "alpha values")->delimiter(',');
    verify->add_option("--gamma", v_gamma, "gamma for the gamma-dependent checks");
    verify->add_option("--x", v_x, "level x");
    verify->add_option("--t", cfg.t, "horizon");
    verify->add_option("--paths", cfg.n_paths, "paths per check");
    verify->add_option("--steps", cfg.n_steps, "steps per path");
    verify->add_option("--eps", cfg.epsilon, "level box half-width");
    verify->add_option("--seed", cfg.seed, "seed (required)");
    verify->add_option("--check", v_checks, "checks to run (default all)")->delimiter(',');
    verify->add_option("--tol", v_tol, "gate width in standard errors");
    verify->add_flag("--inject-fault", v_fault, "perturb each check's constant (negative control)");
    verify->add_option("--fault-scale", v_fault_scale, "factor used by --inject-fault");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }

    try {
        CLI::App* active = app.get_subcommands().front();
        if (!config_path.empty()) apply_config(*active, config_path);
        if ((active == simulate || active == verify) && active->get_option("--seed")->count() == 0) {
            err << "--seed is required\n";
            return 2;
        }
        if (*constants) return cmd_constants(c_alpha, c_gamma, c_tol, format, out_path, out);
        if (*resolvent) return cmd_resolvent(r_model, r_alpha, r_p, r_x, format, out_path, out);
        if (*simulate) return cmd_simulate(s_alpha, s_t, s_paths, s_steps, s_seed, s_gamma, s_dump, out_path, out);
        if (*verify) {
            SuiteParams params;
            params.gamma = v_gamma;
            params.x = v_x;
            cfg.tolerance_multiple = v_tol;
            cfg.fault_scale = v_fault ? v_fault_scale : 1.0;
            params.cfg = cfg;
            return cmd_verify(v_alpha, params, v_checks, format, out_path, out, err);
        }
    } catch (const ConvergenceError& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const UsageError& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    }
    return 2;
}

}  // namespace levy
