#include <doctest.h>

#include <cmath>
#include <map>

#include <protnum/enumeration.hpp>
#include <protnum/sampling.hpp>

using namespace protnum;

namespace
{

// Pearson statistic of the sampled shapes against the exact weights.
// Returns (statistic, degrees of freedom).
std::pair<double, int> chi_square(const std::string &name, int n, long trials, std::uint64_t seed)
{
    const auto family = make_family(name);
    std::map<tree, double> expected;
    rational total = 0;
    const auto trees = enumerate_trees(family, n);
    for (const auto &w : trees) {
        total += w.weight;
    }
    for (const auto &w : trees) {
        expected[w.shape] = rational(w.weight / total).get_d() * static_cast<double>(trials);
    }
    const tree_sampler sampler(family, n);
    std::map<tree, long> seen;
    for (long i = 0; i < trials; ++i) {
        auto rng = trial_engine(seed, static_cast<std::uint64_t>(i));
        ++seen[sampler.sample(n, rng)];
    }
    double stat = 0;
    for (const auto &[shape, count] : seen) {
        REQUIRE(expected.count(shape) == 1);
    }
    for (const auto &[shape, e] : expected) {
        const double d = static_cast<double>(seen[shape]) - e;
        stat += d * d / e;
    }
    return {stat, static_cast<int>(expected.size()) - 1};
}

} // namespace

TEST_CASE("plane trees of size three")
{
    const tree_sampler sampler(make_family("plane"), 3);
    long paths = 0;
    const long trials = 20000;
    for (long i = 0; i < trials; ++i) {
        auto rng = trial_engine(5, static_cast<std::uint64_t>(i));
        const tree t = sampler.sample(3, rng);
        CHECK(t.vertex_count() == 3);
        paths += protection_number(t) == 2 ? 1 : 0;
    }
    const double p = static_cast<double>(paths) / trials;
    CHECK(std::abs(p - 0.5) < 5 * std::sqrt(0.25 / trials));
}

TEST_CASE("exact distribution on tiny sizes")
{
    // Mean df, sd sqrt(2 df); 5 sd is a generous fixed-seed gate.
    for (const char *name : {"plane", "motzkin", "incomplete-binary", "polya", "non-plane-binary", "complete-binary"}) {
        for (int n = 1; n <= 6; ++n) {
            const std::string family_name = name;
        CAPTURE(family_name);
            CAPTURE(n);
            const auto [stat, df] = chi_square(name, n, 100000, 17);
            if (df == 0) {
                CHECK(stat == 0);
                continue;
            }
            CHECK(stat < df + 5 * std::sqrt(2.0 * df));
        }
    }
}

TEST_CASE("sizes")
{
    auto rng = trial_engine(1, 0);
    for (const auto &name : builtin_family_names()) {
        const auto family = make_family(name);
        const tree t = sample_tree(family, 1, rng);
        if (counts_internal_vertices(family)) {
            CHECK(t.internal_count() == 1);
        } else {
            CHECK(t.vertex_count() == 1);
        }
        const tree big = sample_tree(family, 200, rng);
        CHECK((counts_internal_vertices(family) ? big.internal_count() : big.vertex_count()) == 200);
    }
    CHECK_THROWS_AS(tree_sampler(make_family("plane"), 20000), resource_error);
}

TEST_CASE("cayley size frequencies")
{
    // Labelled trees of size 3: 9 in total, 3 are cherries (root with two
    // children), 6 are paths.
    const tree_sampler sampler(make_family("cayley"), 3);
    long cherries = 0;
    const long trials = 30000;
    for (long i = 0; i < trials; ++i) {
        auto rng = trial_engine(9, static_cast<std::uint64_t>(i));
        cherries += protection_number(sampler.sample(3, rng)) == 1 ? 1 : 0;
    }
    const double p = static_cast<double>(cherries) / trials;
    CHECK(std::abs(p - 1.0 / 3) < 5 * std::sqrt(2.0 / 9 / trials));
}

TEST_CASE("determinism and thread independence")
{
    sample_config config{"polya", 60, 400, 42, 1};
    const auto a = to_json(empirical_protection(config));
    const auto b = to_json(empirical_protection(config));
    CHECK(a == b);
    config.threads = 4;
    CHECK(to_json(empirical_protection(config)) == a);
    config.seed = 43;
    CHECK(to_json(empirical_protection(config)) != a);
}

TEST_CASE("a single trial has no variance")
{
    const auto s = empirical_protection({"plane", 10, 1, 3, 1});
    CHECK_FALSE(s.variance_defined);
    CHECK(std::isnan(s.root_se));
    CHECK(to_json(s).find("\"root_se\": null") != std::string::npos);
}

TEST_CASE("survival frequencies decrease")
{
    const auto s = empirical_protection({"plane", 300, 2000, 8, 2});
    REQUIRE(s.per_k_frequencies.size() >= 3);
    CHECK(s.per_k_frequencies[0] == doctest::Approx(1.0));
    for (std::size_t k = 1; k < s.per_k_frequencies.size(); ++k) {
        CHECK(s.per_k_frequencies[k] <= s.per_k_frequencies[k - 1]);
    }
}
