#include <doctest.h>

#include <protnum/enumeration.hpp>
#include <protnum/protection.hpp>
#include <protnum/report_io.hpp>

using namespace protnum;

namespace
{

bigfloat printed(const char *text, mpfr_prec_t bits)
{
    return bigfloat::parse(text, bits);
}

rational pow2(long e)
{
    rational r(1);
    if (e >= 0) {
        mpz_class p;
        mpz_ui_pow_ui(p.get_mpz_t(), 2, static_cast<unsigned long>(e));
        r = p;
    } else {
        mpz_class p;
        mpz_ui_pow_ui(p.get_mpz_t(), 2, static_cast<unsigned long>(-e));
        r = rational(1) / rational(p);
    }
    return r;
}

} // namespace

TEST_CASE("exact values at the singularity")
{
    const auto plane = exact_root_values(make_family("plane"), 3);
    CHECK(plane[1] == fraction(1, 4));
    CHECK(plane[2] == fraction(1, 12));

    const auto motzkin = exact_root_values(make_family("motzkin"), 2);
    CHECK(motzkin[1] == fraction(2, 3));
    CHECK(motzkin[2] == fraction(10, 27));

    const auto cb = exact_root_values(make_family("complete-binary"), 2);
    CHECK(cb[1] == 1);
    CHECK(cb[2] == fraction(1, 4));

    CHECK_THROWS_AS(exact_root_values(make_family("polya"), 2), domain_error);
}

TEST_CASE("plane closed form")
{
    const auto values = exact_root_values(make_family("plane"), 20);
    mpz_class four(1);
    for (long i = 1; i <= 20; ++i) {
        four *= 4;
        CHECK(values[static_cast<std::size_t>(i)] == rational(3) / (rational(2) * (rational(four) + 2)));
    }
}

TEST_CASE("complete binary closed form")
{
    const auto family = make_family("complete-binary");
    const auto values = exact_root_values(family, 5);
    for (long k = 1; k <= 5; ++k) {
        CHECK(values[static_cast<std::size_t>(k)] == pow2(2 - (1L << k)));
        CHECK(exact_root_limit_probability(family, static_cast<int>(k)) == pow2(k + 1 - (1L << k)));
    }
}

TEST_CASE("exact and floating root probabilities agree")
{
    CHECK(exact_root_limit_probability(make_family("plane"), 2) == fraction(4, 9));
    CHECK(exact_root_limit_probability(make_family("complete-binary"), 2) == fraction(1, 2));
    for (const char *name : {"plane", "motzkin", "incomplete-binary", "complete-binary"}) {
        const auto family = make_family(name);
        limit_model model(family, {30});
        for (int k = 1; k <= 6; ++k) {
            const bigfloat exact(exact_root_limit_probability(family, k), model.bits());
            CHECK(abs(model.root_probability(k) - exact) < ten_to_minus(28, model.bits()));
        }
    }
}

TEST_CASE("probabilities decrease in k")
{
    for (const auto &name : builtin_family_names()) {
        const std::string family_name = name;
        CAPTURE(family_name);
        limit_model model(make_family(name), {30});
        bigfloat prev_root(1, model.bits());
        bigfloat prev_vertex(1, model.bits());
        for (int k = 1; k <= 8; ++k) {
            CHECK(model.root_probability(k) <= prev_root);
            CHECK(model.vertex_probability(k) <= prev_vertex);
            CHECK(model.vertex_probability(k).sign() >= 0);
            prev_root = model.root_probability(k);
            prev_vertex = model.vertex_probability(k);
        }
    }
}

TEST_CASE("convolution identity for simply generated S_k")
{
    for (const char *name : {"plane", "motzkin", "cayley"}) {
        const auto family = make_family(name);
        const std::size_t n = 40;
        const auto tks = tk_sequence(family, 3, n + 1);
        const auto t = tks[0];
        const auto tprime = t.derivative();
        const auto z = rational_series::monomial(rational(1), 1, n);
        for (std::size_t k = 1; k <= 3; ++k) {
            const auto s = sk_series(family, static_cast<int>(k), n);
            CHECK(s * t.with_order(n) == tks[k].with_order(n) * tprime.with_order(n) * z * phi_zero(family));
        }
    }
}

TEST_CASE("finite-n probabilities approach the limit")
{
    for (const char *name : {"plane", "motzkin", "polya", "non-plane-binary"}) {
        const std::string family_name = name;
        CAPTURE(family_name);
        const auto family = make_family(name);
        limit_model model(family, {30});
        const bigfloat eps = ten_to_minus(28, model.bits());
        for (int k = 1; k <= 3; ++k) {
            const bigfloat at40(finite_probabilities(family, 40, k).root, model.bits());
            const bigfloat at80(finite_probabilities(family, 80, k).root, model.bits());
            const bigfloat limit = model.root_probability(k);
            // Some probabilities are exact for every n (a root is never a leaf).
            CHECK((abs(at80 - limit) < abs(at40 - limit) || (abs(at40 - limit) < eps && abs(at80 - limit) < eps)));

            const bigfloat v40(finite_probabilities(family, 40, k).vertex, model.bits());
            const bigfloat v80(finite_probabilities(family, 80, k).vertex, model.bits());
            const bigfloat vlimit = model.vertex_probability(k);
            CHECK((abs(v80 - vlimit) < abs(v40 - vlimit) || (abs(v40 - vlimit) < eps && abs(v80 - vlimit) < eps)));
        }
    }
}

TEST_CASE("plane report")
{
    const auto report = root_limits(make_family("plane"), {30});
    CHECK(report.mean.str(16) == "1.622971384715353");
    CHECK(abs(report.mean - printed("1.622971384715353", report.mean.bits())).to_double() < 1e-12);
    CHECK(report.tail_bound < ten_to_minus(30, report.mean.bits()));
    CHECK(report.probabilities.size() == static_cast<std::size_t>(report.k_max));
}

TEST_CASE("variance is consistent with the second moment")
{
    const auto report = vertex_limits(make_family("motzkin"), {30});
    bigfloat mean(report.mean.bits());
    bigfloat second(report.mean.bits());
    for (std::size_t i = 0; i < report.probabilities.size(); ++i) {
        mean += report.probabilities[i];
        second += report.probabilities[i] * static_cast<long>(2 * i + 1);
    }
    CHECK(abs(mean - report.mean) < ten_to_minus(25, mean.bits()));
    CHECK(abs(second - mean * mean - report.variance) < ten_to_minus(25, mean.bits()));
}

TEST_CASE("polya mean forms agree")
{
    limit_model model(make_family("polya"), {30});
    const auto report = model.report(protection_mode::root);
    CHECK(abs(polya_alternative_mean(model) - report.mean) < ten_to_minus(25, report.mean.bits()));
}

TEST_CASE("json and csv round trip")
{
    for (const char *name : {"plane", "polya"}) {
        const auto report = vertex_limits(make_family(name), {24});
        const auto back = report_from_json(to_json(report));
        CHECK(same_report(report, back));
        CHECK(to_json(back) == to_json(report));
        CHECK(same_report(report, report_from_csv(to_csv(report))));
    }
    const auto s = tk_coefficients(make_family("cayley"), 1, 8);
    CHECK(rational_series_from_json(series_to_json(s)) == s);
}
