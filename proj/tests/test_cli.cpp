#include <doctest.h>

#include <cstdlib>
#include <sstream>

#include <json.hpp>

#include <protnum/protection.hpp>
#include <protnum/report_io.hpp>

#include "cli.hpp"

using namespace protnum;

namespace
{

struct result {
    int code;
    std::string out;
    std::string err;
};

result call(std::vector<std::string> args)
{
    std::ostringstream out;
    std::ostringstream err;
    const int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::string line_starting(const std::string &text, const std::string &prefix)
{
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (line.rfind(prefix, 0) == 0) {
            return line;
        }
    }
    return {};
}

} // namespace

TEST_CASE("limits")
{
    const auto r = call({"limits", "--family", "plane", "--mode", "root", "--precision", "30"});
    REQUIRE(r.code == 0);
    const auto mean = line_starting(r.out, "mean");
    CHECK(mean.find(" 1.622971384715353") != std::string::npos);
    CHECK(line_starting(r.out, "P(>=2)").find("0.4444444444") != std::string::npos);
}

TEST_CASE("limits json round trips")
{
    const auto r = call({"limits", "--family", "motzkin", "--mode", "vertex", "--precision", "25", "--format", "json"});
    REQUIRE(r.code == 0);
    const auto parsed = report_from_json(r.out);
    CHECK(same_report(parsed, vertex_limits(make_family("motzkin"), {25})));
}

TEST_CASE("limits csv round trips")
{
    const auto r = call({"limits", "--family", "cayley", "--precision", "25", "--format", "csv"});
    REQUIRE(r.code == 0);
    CHECK(r.out.rfind("family,mode,k,value\n", 0) == 0);
    CHECK(same_report(report_from_csv(r.out), root_limits(make_family("cayley"), {25})));
}

TEST_CASE("probs")
{
    auto r = call({"probs", "--family", "plane", "--n", "3", "--k", "2"});
    CHECK(r.code == 0);
    CHECK(r.out == "1/2\n");

    r = call({"probs", "--family", "plane", "--n", "3", "--k", "1", "--mode", "vertex"});
    CHECK(r.out == "1/2\n");

    r = call({"probs", "--family", "plane", "--k", "2", "--precision", "20"});
    CHECK(r.code == 0);
    CHECK(r.out.rfind("0.4444444444", 0) == 0);

    r = call({"probs", "--family", "complete-binary", "--kmax", "3", "--precision", "20", "--format", "csv"});
    CHECK(r.out.find("complete-binary,root,,2,0.5") != std::string::npos);

    r = call({"probs", "--family", "complete-binary", "--n", "0", "--k", "1"});
    CHECK(r.code == cli::usage_error);
}

TEST_CASE("coeffs")
{
    auto r = call({"coeffs", "--family", "plane", "--series", "tk", "--k", "0", "--n", "5"});
    CHECK(r.code == 0);
    CHECK(r.out == "0 0\n1 1\n2 1\n3 2\n4 5\n5 14\n");

    r = call({"coeffs", "--family", "cayley", "--k", "0", "--n", "4", "--format", "json"});
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["coefficients"][4] == "8/3");

    r = call({"coeffs", "--family", "plane", "--series", "sk", "--k", "1", "--n", "3", "--format", "csv"});
    CHECK(r.out.find("plane,sk,1,3,3\n") != std::string::npos);
}

TEST_CASE("table csv")
{
    const auto r = call({"table", "--format", "csv", "--precision", "30"});
    REQUIRE(r.code == 0);
    CHECK(r.out.find("Polya trees, 2.15489, 0.99532") != std::string::npos);
    CHECK(r.out.find("Plane trees, 0.7276492769137261, 0.8168993794836289") != std::string::npos);
    CHECK(r.out.find("Complete binary trees, 1.56298, 1.26568") != std::string::npos);
}

TEST_CASE("table restricted to one family")
{
    const auto r = call({"table", "--family", "polya", "--precision", "20"});
    REQUIRE(r.code == 0);
    CHECK(r.out.find("Polya trees") != std::string::npos);
    CHECK(r.out.find("Plane trees") == std::string::npos);
}

TEST_CASE("display_like")
{
    const auto bits = bits_for_digits(30);
    CHECK(cli::display_like(bigfloat::parse("2.154889671973873", bits), "2.15489") == "2.15489");
    CHECK(cli::display_like(bigfloat::parse("0.9953254987", bits), "0.99532") == "0.99532");
    CHECK(cli::display_like(bigfloat::parse("1.7157932335", bits), "1.70760") == "1.71579");
    CHECK(cli::display_like(bigfloat::parse("0.0004", bits), "0.01") == "0.01");
    CHECK(cli::display_like(bigfloat::parse("0.0004", bits), "0.05") == "0.00");
    CHECK(cli::display_like(bigfloat::parse("-1.25", bits), "3") == "-1");
}

TEST_CASE("sample")
{
    const auto a = call({"sample", "--family", "plane", "--n", "50", "--trials", "200", "--seed", "9", "--format", "json"});
    const auto b = call({"sample", "--family", "plane", "--n", "50", "--trials", "200", "--seed", "9", "--format", "json",
                         "--threads", "3"});
    REQUIRE(a.code == 0);
    CHECK(a.out == b.out);
    const auto j = nlohmann::json::parse(a.out);
    CHECK(j["trials"] == 200);

    const auto one = call({"sample", "--family", "plane", "--n", "5", "--trials", "1"});
    CHECK(one.out.find("undefined") != std::string::npos);
}

TEST_CASE("verify a single criterion")
{
    auto r = call({"verify", "--criterion", "4"});
    CHECK(r.code == 0);
    CHECK(r.out.rfind("PASS  criterion 4", 0) == 0);

    r = call({"verify", "--criterion", "1"});
    CHECK(r.code == cli::check_failed);
    CHECK(r.err.find("first failing check: criterion 1") != std::string::npos);
}

TEST_CASE("usage errors")
{
    CHECK(call({}).code == cli::usage_error);
    CHECK(call({"frobnicate"}).code == cli::usage_error);
    CHECK(call({"limits", "--family", "oak"}).code == cli::usage_error);
    CHECK(call({"limits", "--mode", "sideways"}).code == cli::usage_error);
    CHECK(call({"limits", "--bogus"}).code == cli::usage_error);
    CHECK(call({"coeffs", "--series", "xk"}).code == cli::usage_error);
    CHECK(call({"limits", "--help"}).code == 0);
}

TEST_CASE("precision failure")
{
    const auto r = call({"limits", "--family", "polya", "--precision", "80", "--trunc", "16"});
    CHECK(r.code == cli::precision_failure);
}

TEST_CASE("precision from the environment")
{
    ::setenv("PROTNUM_PRECISION", "20", 1);
    const auto r = call({"limits", "--family", "plane"});
    ::unsetenv("PROTNUM_PRECISION");
    CHECK(line_starting(r.out, "precision") == "precision 20");
    ::setenv("PROTNUM_PRECISION", "lots", 1);
    CHECK(call({"limits"}).code == cli::usage_error);
    ::unsetenv("PROTNUM_PRECISION");
}
