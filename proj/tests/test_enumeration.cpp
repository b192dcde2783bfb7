#include <doctest.h>

#include <set>

#include <protnum/enumeration.hpp>
#include <protnum/protection.hpp>

using namespace protnum;

namespace
{

// Exhaustive counts against coefficient extraction, every n <= n_max and
// k <= 6.
void check_oracle(const std::string &name, int n_max)
{
    const auto family = make_family(name);
    const auto order = static_cast<std::size_t>(n_max);
    const auto tks = tk_sequence(family, 6, order + 1);
    const auto t = tks[0];
    const int n_min = counts_internal_vertices(family) ? 0 : 1;
    for (int n = n_min; n <= n_max; ++n) {
        const auto table = brute_force_stats(family, n, 6, n_max);
        for (const auto &row : table.rows) {
            CAPTURE(name);
            CAPTURE(n);
            CAPTURE(row.k);
            CHECK(row.trees_ge_k == tks[static_cast<std::size_t>(row.k)][static_cast<std::size_t>(n)]);
            const auto sk = sk_from(family, t, tks[static_cast<std::size_t>(row.k)], order);
            CHECK(row.protected_total == sk[static_cast<std::size_t>(n)]);
        }
    }
}

} // namespace

TEST_CASE("small plane trees")
{
    const auto table = brute_force_stats(make_family("plane"), 3);
    CHECK(table.rows[0].trees_ge_k == 2);
    CHECK(table.rows[0].protected_total == 6);
    CHECK(table.rows[1].protected_total == 3);
    CHECK(table.rows[2].trees_ge_k == 1);
    CHECK(table.rows[3].trees_ge_k == 0);
}

TEST_CASE("counts of small trees")
{
    CHECK(enumerate_trees(make_family("polya"), 4).size() == 4);
    CHECK(enumerate_trees(make_family("non-plane-binary"), 3).size() == 2);
    CHECK(enumerate_trees(make_family("complete-binary"), 3).size() == 5);
    CHECK(enumerate_trees(make_family("motzkin"), 5).size() == 9);
    CHECK(enumerate_trees(make_family("polya"), 12, 12).size() == 4766);
}

TEST_CASE("unordered enumerations list each class once")
{
    for (const char *name : {"polya", "non-plane-binary"}) {
        const auto trees = enumerate_trees(make_family(name), 8);
        std::set<tree> seen;
        for (const auto &w : trees) {
            CHECK(canonical(w.shape) == w.shape);
            seen.insert(w.shape);
        }
        CHECK(seen.size() == trees.size());
    }
}

TEST_CASE("weights of incomplete binary trees")
{
    // phi = (1+t)^2: weights are the products of binomial(2, outdegree).
    rational total = 0;
    for (const auto &w : enumerate_trees(make_family("incomplete-binary"), 4)) {
        total += w.weight;
    }
    CHECK(total == 14);
}

TEST_CASE("oracle errors")
{
    CHECK_THROWS_AS(brute_force_stats(make_family("plane"), 13), resource_error);
    CHECK_THROWS_AS(brute_force_stats(make_family("cayley"), 3), unsupported_oracle_error);
}

TEST_CASE("oracle equivalence")
{
    for (const char *name : {"plane", "motzkin", "incomplete-binary", "complete-binary"}) {
        check_oracle(name, 10);
    }
    check_oracle("polya", 12);
    check_oracle("non-plane-binary", 12);
}

TEST_CASE("coefficients decrease in k")
{
    for (const auto &name : builtin_family_names()) {
        const auto tks = tk_sequence(make_family(name), 8, 60);
        for (std::size_t k = 0; k + 1 < tks.size(); ++k) {
            for (std::size_t n = 0; n <= 60; ++n) {
                CHECK(tks[k][n] >= tks[k + 1][n]);
                CHECK(tks[k + 1][n] >= 0);
            }
        }
    }
}

TEST_CASE("polya S_k residual")
{
    const auto family = make_family("polya");
    const std::size_t n = 80;
    const auto tks = tk_sequence(family, 4, n + 1);
    for (int k = 1; k <= 4; ++k) {
        const auto s = sk_series(family, k, n);
        rational_series sum = s;
        for (std::size_t i = 2; i <= n; ++i) {
            sum += substitute_power(s, i);
        }
        const auto residual = tks[0].with_order(n) * sum - s + tks[static_cast<std::size_t>(k)].with_order(n);
        CHECK(residual == rational_series::zero(n));
    }
}

TEST_CASE("finite probabilities")
{
    const auto plane = make_family("plane");
    CHECK(finite_probabilities(plane, 3, 2).root == fraction(1, 2));
    CHECK(finite_probabilities(plane, 3, 1).vertex == fraction(1, 2));
    for (const auto &name : builtin_family_names()) {
        const auto p = finite_probabilities(make_family(name), 5, 0);
        CHECK(p.root == 1);
        CHECK(p.vertex == 1);
    }
    CHECK_THROWS_AS(finite_probabilities(make_family("complete-binary"), 0, 1), undefined_probability_error);
}

TEST_CASE("oracle csv")
{
    const auto csv = oracle_csv({brute_force_stats(make_family("plane"), 3, 2)});
    CHECK(csv.rfind("family,n,k,trees_ge_k,protected_total\n", 0) == 0);
    CHECK(csv.find("plane,3,2,1,1\n") != std::string::npos);
}
