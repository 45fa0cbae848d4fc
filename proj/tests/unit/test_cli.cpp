#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"
#include "levy/cli.hpp"
#include "levy/report.hpp"

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run cli(std::vector<std::string> args) {
    args.insert(args.begin(), "levy");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = levy::run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::filesystem::path scratch(const std::string& name) {
    auto dir = std::filesystem::temp_directory_path() / "levy_cli_test";
    std::filesystem::create_directories(dir);
    return dir / name;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream f(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

}  // namespace

TEST_CASE("constants command") {
    auto r = cli({"constants", "--alpha", "1.5", "--gamma", "1.2"});
    REQUIRE(r.code == 0);
    auto rows = nlohmann::ordered_json::parse(r.out);
    CHECK(rows.size() == 11);
    for (const auto& row : rows) {
        CAPTURE(row.dump());
        if (!row["rel_gap"].is_null()) CHECK(row["rel_gap"].get<double>() < 1e-4);
    }
    CHECK(rows[3]["name"] == "c3");
    CHECK(rows[3]["gamma_used"].get<double>() == 1.2);
    // c4 is outside its regime at 1.2, so the midpoint is used
    CHECK(rows[4]["gamma_used"].get<double>() == 0.375);

    auto b = cli({"constants", "--alpha", "2", "--format", "csv"});
    CHECK(b.code == 0);
    CHECK(b.out.find("c2,2,,,,,boundary-skip") != std::string::npos);

    auto bad = cli({"constants", "--alpha", "0.9"});
    CHECK(bad.code == 2);
    CHECK(bad.err.find("alpha") != std::string::npos);

    // an impossible tolerance fails with exit 1
    CHECK(cli({"constants", "--alpha", "1.5", "--tol", "1e-300"}).code == 1);
}

TEST_CASE("resolvent command") {
    auto r = cli({"resolvent", "--model", "brownian", "--p", "1", "--x", "0,1", "--format", "csv"});
    REQUIRE(r.code == 0);
    std::istringstream lines(r.out);
    std::string header, first;
    std::getline(lines, header);
    std::getline(lines, first);
    CHECK(header == "model,alpha,p,x,u,v");
    CHECK(first == "brownian,,1,0,0.70710678118654757,0");
    CHECK(cli({"resolvent", "--p", "-1"}).code == 2);
}

TEST_CASE("simulate command") {
    const auto file = scratch("one.csv");
    auto r = cli({"simulate", "--alpha", "1.5", "--paths", "1", "--steps", "4", "--seed", "5", "--out", file.string()});
    REQUIRE(r.code == 0);
    const std::string csv = slurp(file);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 6);
    CHECK(csv.rfind("t,x\n0,0\n", 0) == 0);

    const auto again = scratch("again.csv");
    cli({"simulate", "--alpha", "1.5", "--paths", "1", "--steps", "4", "--seed", "5", "--out", again.string()});
    CHECK(slurp(again) == csv);

    auto many = cli({"simulate", "--alpha", "1.5", "--paths", "3", "--steps", "8", "--seed", "5", "--dump", "2",
                     "--out", scratch("many.csv").string()});
    CHECK(many.code == 0);
    CHECK(std::filesystem::exists(scratch("many_0.csv")));
    CHECK(std::filesystem::exists(scratch("many_1.csv")));

    auto summary = cli({"simulate", "--alpha", "1.5", "--paths", "10000", "--steps", "1", "--seed", "5"});
    auto j = nlohmann::json::parse(summary.out);
    CHECK(std::abs(j["moment_estimate"].get<double>() - j["moment_target"].get<double>()) <=
          4.0 * j["std_error"].get<double>());

    CHECK(cli({"simulate", "--alpha", "1.5"}).code == 2);  // no seed
    CHECK(cli({"simulate", "--alpha", "1.5", "--seed", "1", "--out", "/nonexistent/dir/x.csv"}).code == 2);
}

TEST_CASE("verify command") {
    auto r = cli({"verify", "--seed", "42", "--check", "tanaka,ito_tanaka", "--paths", "500", "--steps", "1024",
                  "--eps", "0.0625"});
    CHECK(r.code == 0);
    auto arr = nlohmann::ordered_json::parse(r.out);
    REQUIRE(arr.size() == 2);
    for (const auto& rep : arr) {
        std::vector<std::string> keys;
        for (auto it = rep.begin(); it != rep.end(); ++it) keys.push_back(it.key());
        CHECK(keys == std::vector<std::string>(std::begin(levy::kReportFields), std::end(levy::kReportFields)));
    }
    CHECK(r.err.find("tanaka") != std::string::npos);

    auto fault = cli({"verify", "--seed", "42", "--check", "tanaka", "--paths", "2000", "--steps", "1024", "--eps",
                      "0.0625", "--inject-fault"});
    CHECK(fault.code == 1);
    CHECK(nlohmann::json::parse(fault.out)[0]["pass"] == false);

    CHECK(cli({"verify", "--seed", "42", "--paths", "0"}).code == 2);
    CHECK(cli({"verify", "--seed", "42", "--check", "nope"}).code == 2);
    CHECK(cli({"verify", "--check", "tanaka"}).code == 2);
    CHECK(cli({"verify", "--seed", "1", "--check", "dirichlet", "--gamma", "1.2", "--paths", "10"}).code == 2);
}

TEST_CASE("config file, flags win") {
    const auto cfg = scratch("run.cfg");
    {
        std::ofstream f(cfg);
        f << "# small run\nseed = 3\nsteps = 4\npaths = 1\nalpha = 1.7\n";
    }
    const auto a = scratch("cfg_a.csv");
    const auto b = scratch("cfg_b.csv");
    CHECK(cli({"simulate", "--config", cfg.string(), "--out", a.string()}).code == 0);
    CHECK(cli({"simulate", "--config", cfg.string(), "--steps", "8", "--out", b.string()}).code == 0);
    const std::string sa = slurp(a), sb = slurp(b);
    CHECK(std::count(sa.begin(), sa.end(), '\n') == 6);
    CHECK(std::count(sb.begin(), sb.end(), '\n') == 10);

    const auto bad = scratch("bad.cfg");
    {
        std::ofstream f(bad);
        f << "colour = blue\n";
    }
    CHECK(cli({"simulate", "--config", bad.string(), "--seed", "1"}).code == 2);
    CHECK(cli({"simulate", "--config", scratch("missing.cfg").string(), "--seed", "1"}).code == 2);
}
