#include <doctest.h>

#include "cli.hpp"

#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include <json.hpp>

using hdet::cli::run;

namespace {

struct Result {
    int code;
    std::string out, err;
};

Result invoke(const std::vector<std::string>& args)
{
    std::ostringstream out, err;
    const int code = run(args, out, err);
    return {code, out.str(), err.str()};
}

} // namespace

TEST_CASE("det csv contract")
{
    const Result r = invoke({"det", "--kernel", "gaussian", "--t", "-1:1:5", "--gamma", "1"});
    CHECK(r.code == 0);
    std::istringstream in(r.out);
    std::string line;
    std::getline(in, line);
    CHECK(line == "t,gamma,logF,logG_plus,logG_minus");
    int rows = 0;
    while (std::getline(in, line)) {
        ++rows;
        std::stringstream ss(line);
        std::string f;
        while (std::getline(ss, f, ',')) {
            const double v = std::strtod(f.c_str(), nullptr);
            char buf[32];
            std::snprintf(buf, sizeof buf, "%.17g", v);
            const double back = std::strtod(buf, nullptr);
            CHECK(std::memcmp(&v, &back, sizeof v) == 0);
        }
    }
    CHECK(rows == 5);
}

TEST_CASE("unknown kernel is a usage error")
{
    const Result r = invoke({"det", "--kernel", "nosuch", "--t", "0"});
    CHECK(r.code == 2);
    CHECK(r.err.find("unknown kernel") != std::string::npos);
    CHECK(invoke({"det", "--kernel", "gaussian"}).code == 2);
    CHECK(invoke({"det", "--t", "0", "--gamma", "2"}).code == 2);
    CHECK(invoke({"nosuch"}).code == 2);
    CHECK(invoke({"det", "--t", "0", "--param", "alpha"}).code == 2);
}

TEST_CASE("output is deterministic across thread counts")
{
    const std::vector<std::string> args{"det", "--kernel", "bessel", "--param", "alpha=1", "--t", "0.5:3:6",
                                        "--gamma", "0.25,1"};
    setenv("HDET_THREADS", "1", 1);
    const Result a = invoke(args);
    setenv("HDET_THREADS", "4", 1);
    const Result b = invoke(args);
    unsetenv("HDET_THREADS");
    CHECK(a.code == 0);
    CHECK(a.out == b.out);
}

TEST_CASE("json schema")
{
    const Result r = invoke({"rhp-check", "--kernel", "gaussian", "--u", "0", "--format", "json"});
    REQUIRE(r.code == 0);
    const auto doc = nlohmann::json::parse(r.out);
    CHECK(doc.contains("config"));
    CHECK(doc["rows"].size() == 12);
    const auto& fit = doc["diagnostics"]["x1"][0]["fit"];
    CHECK(fit.size() == 2);
    CHECK(fit[0][0].size() == 2);
}

TEST_CASE("config file merges under flags")
{
    const std::string path = "hdet_cli_test.ini";
    {
        std::ofstream f(path);
        f << "kernel = \"airy\"\nt = \"0,1\"\n";
    }
    const Result from_file = invoke({"det", "--config", path});
    const Result flag_wins = invoke({"det", "--config", path, "--t", "2"});
    std::remove(path.c_str());
    CHECK(from_file.code == 0);
    CHECK(from_file.out.find("\n1,1,") != std::string::npos);
    CHECK(flag_wins.out.find("\n2,1,") != std::string::npos);
    CHECK(flag_wins.out.find("\n0,1,") == std::string::npos);
}

TEST_CASE("range parsing")
{
    CHECK(hdet::cli::parse_range("0:1:3") == std::vector<double>{0.0, 0.5, 1.0});
    CHECK(hdet::cli::parse_range("2") == std::vector<double>{2.0});
    CHECK(hdet::cli::parse_range("-1,0.5") == std::vector<double>{-1.0, 0.5});
    CHECK(hdet::cli::parse_ids("1-3,7") == std::vector<int>{1, 2, 3, 7});
    CHECK_THROWS(hdet::cli::parse_range("0:1"));
    CHECK_THROWS(hdet::cli::parse_range("a"));
}

TEST_CASE("subcommands run")
{
    CHECK(invoke({"edge", "--t", "0", "--N", "2"}).code == 0);
    CHECK(invoke({"tw", "--t", "-1,0"}).code == 0);
    CHECK(invoke({"perturbed", "--kernel", "bessel", "--t", "1", "--gamma", "0.5"}).code == 0);
    CHECK(invoke({"zs-check", "--t", "-1:1:5", "--N", "1"}).code == 0);
    CHECK(invoke({"ode-compare", "--kernel", "airy", "--t", "0"}).code == 0);
    CHECK(invoke({"ode-compare", "--kernel", "gaussian", "--t", "0"}).code == 2);
    CHECK(invoke({"selftest", "--only", "13"}).code == 0);
    CHECK(invoke({"selftest", "--only", "99"}).code == 2);
}
