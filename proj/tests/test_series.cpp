#include <doctest.h>

#include <random>

#include <protnum/series.hpp>

using namespace protnum;

namespace
{

rational_series rs(std::initializer_list<long> c)
{
    std::vector<rational> v;
    for (long x : c) {
        v.emplace_back(x);
    }
    return rational_series(std::move(v));
}

rational_series z_of(std::size_t n)
{
    return rational_series::monomial(rational(1), 1, n);
}

rational_series random_series(std::mt19937 &rng, std::size_t n)
{
    std::uniform_int_distribution<long> num(-9, 9);
    std::uniform_int_distribution<long> den(1, 5);
    std::vector<rational> v;
    for (std::size_t i = 0; i <= n; ++i) {
        v.push_back(fraction(num(rng), den(rng)));
    }
    return rational_series(std::move(v));
}

} // namespace

TEST_CASE("ring operations")
{
    CHECK(rs({1, 1, 0, 0}) * rs({1, -1, 0, 0}) == rs({1, 0, -1, 0}));
    CHECK(rs({3, 1, 4}) + rational_series::zero(2) == rs({3, 1, 4}));
    CHECK(rs({1, 0, 0, 0, 0}) / rs({1, -1, 0, 0, 0}) == rs({1, 1, 1, 1, 1}));
    CHECK((rs({1, 2, 3}) * rational(2)) == rs({2, 4, 6}));
    CHECK((rs({1, 2, 3}) - rs({1, 2, 3})) == rational_series::zero(2));
}

TEST_CASE("results are truncated at the smaller order")
{
    const auto a = rs({1, 1, 1, 1, 1, 1});
    const auto b = rs({1, 1});
    CHECK((a * b).order() == 1);
    CHECK((a + b).order() == 1);
    CHECK((a / b).order() == 1);
}

TEST_CASE("division by a non-unit")
{
    CHECK_THROWS_AS(rs({1, 1}) / rs({0, 1}), unit_divisor_error);
}

TEST_CASE("ring laws on random rational series")
{
    std::mt19937 rng(7);
    for (int trial = 0; trial < 25; ++trial) {
        const auto a = random_series(rng, 8);
        const auto b = random_series(rng, 8);
        const auto c = random_series(rng, 8);
        CHECK(a * b == b * a);
        CHECK((a * b) * c == a * (b * c));
        CHECK(a * (b + c) == a * b + a * c);
        CHECK(a + b == b + a);
        if (sgn(b[0]) != 0) {
            CHECK((a / b) * b == a);
        }
    }
}

TEST_CASE("substitute_power")
{
    CHECK(substitute_power(z_of(5), 2) == rs({0, 0, 1, 0, 0, 0}));
    CHECK(substitute_power(rs({1, 1, 2, 0, 0, 0}), 2) == rs({1, 0, 1, 0, 2, 0}));
    CHECK(substitute_power(rational_series::zero(6), 3) == rational_series::zero(6));
    CHECK_THROWS_AS(substitute_power(z_of(3), 1), domain_error);

    std::mt19937 rng(11);
    const auto f = random_series(rng, 20);
    for (std::size_t i = 2; i <= 5; ++i) {
        const auto g = substitute_power(f, i);
        for (std::size_t m = 0; m * i <= 20; ++m) {
            CHECK(g[m * i] == f[m]);
        }
    }
}

TEST_CASE("series_exp")
{
    CHECK(series_exp(rational_series::zero(4)) == rs({1, 0, 0, 0, 0}));
    const auto e = series_exp(z_of(4));
    CHECK(e[2] == fraction(1, 2));
    CHECK(e[3] == fraction(1, 6));
    CHECK(e[4] == fraction(1, 24));
    // (1 + z + z^2/2)(1 + z^2) = 1 + z + 3/2 z^2 + ...
    CHECK(series_exp(rs({0, 1, 1, 0}))[2] == fraction(3, 2));
    CHECK_THROWS_AS(series_exp(rs({1, 1})), domain_error);

    std::mt19937 rng(3);
    for (int trial = 0; trial < 5; ++trial) {
        auto f = random_series(rng, 10);
        f = f - rational_series::constant(f[0], 10);
        CHECK(series_exp(f) * series_exp(-f) == rational_series::constant(rational(1), 10));
    }
}

TEST_CASE("evaluate_at")
{
    const auto bits = bits_for_digits(40);
    // Plane trees: C(z) = 1/2 - sqrt(1/4 - z).
    std::vector<rational> c(121, rational(0));
    c[1] = 1;
    for (std::size_t n = 1; n < 120; ++n) {
        c[n + 1] = c[n] * fraction(static_cast<long>(2 * (2 * n - 1)), static_cast<long>(n + 1));
    }
    const rational_series plane(c);
    const bigfloat x(fraction(1, 8), bits);
    const bigfloat rho(fraction(1, 4), bits);
    const auto e = evaluate_at(plane, x, rho);
    const bigfloat exact = bigfloat(fraction(1, 2), bits) - sqrt(bigfloat(fraction(1, 8), bits));
    REQUIRE(e.tail_bound.has_value());
    CHECK(abs(e.value - exact) <= *e.tail_bound);
    CHECK(e.value.str(7) == "0.1464466");

    const auto at0 = evaluate_at(rs({5, 1, 2}), bigfloat(bits));
    CHECK(at0.value == 5);
    CHECK_FALSE(at0.tail_bound.has_value());

    const auto ex = evaluate_at(series_exp(z_of(10)), bigfloat(1, bits));
    CHECK_FALSE(ex.tail_bound.has_value());
    CHECK(abs(ex.value - exp(bigfloat(1, bits))).to_double() < 1e-7);

    CHECK_THROWS_AS(evaluate_at(plane, rho, rho), convergence_domain_error);
}

TEST_CASE("evaluate_at tail bound on incomplete binary trees")
{
    // phi = (1+t)^2: T = (1 - 2z - sqrt(1 - 4z)) / (2z).
    const auto bits = bits_for_digits(40);
    const std::size_t n = 60;
    const auto t = solve_fixed_point<rational>(
        [](const rational_series &y) {
            const auto one = rational_series::constant(rational(1), y.order());
            return z_of(y.order()) * (one + y) * (one + y);
        },
        n);
    const bigfloat x(fraction(1, 5), bits);
    const bigfloat rho(fraction(1, 4), bits);
    const auto e = evaluate_at(t, x, rho);
    const bigfloat exact = (1 - 2 * x - sqrt(1 - 4 * x)) / (2 * x);
    CHECK(abs(e.value - exact) <= *e.tail_bound);
}

TEST_CASE("solve_fixed_point examples")
{
    const auto plane = solve_fixed_point<rational>(
        [](const rational_series &y) {
            return z_of(y.order()) / (rational_series::constant(rational(1), y.order()) - y);
        },
        5);
    CHECK(plane == rs({0, 1, 1, 2, 5, 14}));

    const auto motzkin = solve_fixed_point<rational>(
        [](const rational_series &y) {
            return z_of(y.order()) * (rational_series::constant(rational(1), y.order()) + y + y * y);
        },
        5);
    CHECK(motzkin == rs({0, 1, 1, 2, 4, 9}));

    const auto npb = solve_fixed_point<rational>(
        [](const rational_series &y) {
            return rational_series::constant(rational(1), y.order())
                   + z_of(y.order()) * (y * y + substitute_power(y, 2)) * fraction(1, 2);
        },
        5);
    CHECK(npb == rs({1, 1, 1, 2, 3, 6}));
}

TEST_CASE("solve_fixed_point output is a fixed point and respects the application bound")
{
    const std::size_t n = 40;
    auto op = [](const rational_series &y) {
        return z_of(y.order()) * (rational_series::constant(rational(1), y.order()) + y + y * y);
    };
    fixed_point_stats stats;
    const auto y = solve_fixed_point<rational>(op, n, rational(0), &stats);
    CHECK(op(y) == y);
    CHECK(stats.applications <= n + 2);
}

TEST_CASE("doubling operators settle in logarithmically many applications")
{
    // Newton form of y = z(1 + y + y^2).
    auto op = [](const rational_series &y) {
        const auto one = rational_series::constant(rational(1), y.order());
        const auto z = z_of(y.order());
        const auto g = z * (one + y + y * y);
        return y + (g - y) / (one - z * (one + y * rational(2)));
    };
    fixed_point_stats stats;
    solve_fixed_point<rational>(op, 256, rational(0), &stats);
    CHECK(stats.applications <= 20);
}

TEST_CASE("non-contracting operator")
{
    auto op = [](const rational_series &y) { return y + rational_series::constant(rational(1), y.order()); };
    CHECK_THROWS_AS(solve_fixed_point<rational>(op, 10), divergence_error);
}

TEST_CASE("float series mirror rational ones")
{
    const auto bits = bits_for_digits(30);
    const auto f = to_float_series(rs({0, 1, 1, 0, 0}), bits);
    const auto e = series_exp(f);
    CHECK(abs(e[2] - bigfloat(fraction(3, 2), bits)) < ten_to_minus(30, bits));
    CHECK(coefficient_strings(rs({1, 2})) == std::vector<std::string>{"1", "2"});
    CHECK(coefficient_strings(rational_series(std::vector<rational>{fraction(3, 6)})) == std::vector<std::string>{"1/2"});
}
