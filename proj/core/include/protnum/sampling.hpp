#ifndef PROTNUM_SAMPLING_HPP
#define PROTNUM_SAMPLING_HPP

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include <protnum/families.hpp>
#include <protnum/tree.hpp>

namespace protnum
{

inline constexpr int default_sampling_cap = 10000;

// Per-trial engine: SplitMix64 of (seed, trial) seeds an mt19937_64, so
// trial i sees the same stream no matter which thread runs it.
std::mt19937_64 trial_engine(std::uint64_t seed, std::uint64_t trial);

// Uniform double in [0, 1) from the top 53 bits.
double uniform01(std::mt19937_64 &rng);

// Exact-size sampler. Tables hold t_m rho^m in double precision, which
// keeps them in range for every size up to the cap. Unordered kinds come
// back in canonical form.
class tree_sampler
{
public:
    tree_sampler(family_spec family, int max_size, int cap = default_sampling_cap);

    // Throws impossible_size_error when no tree has size n.
    tree sample(int n, std::mt19937_64 &rng) const;

    const family_spec &family() const noexcept
    {
        return m_family;
    }

    // Scaled count t_n rho^n.
    double scaled_count(int n) const;

private:
    tree sample_plane(int n, std::mt19937_64 &rng) const;
    tree sample_polya(int n, std::mt19937_64 &rng) const;
    tree sample_binary(int n, std::mt19937_64 &rng) const;
    tree sample_cayley(int n, std::mt19937_64 &rng) const;

    family_spec m_family;
    int m_max;
    double m_r;
    std::vector<double> m_a;                  // t_m r^m
    std::vector<std::vector<double>> m_power; // [z^m] T^j r^m (polynomial phi)
    std::vector<double> m_forest;             // [z^m] 1/(1-T) r^m (plane)
    std::vector<double> m_phi;
    std::vector<double> m_r_pow;
};

tree sample_tree(const family_spec &family, int n, std::mt19937_64 &rng);

struct sample_config {
    std::string family;
    int n = 1;
    long trials = 1;
    std::uint64_t seed = 0;
    unsigned threads = 1;
};

struct empirical_summary {
    std::string family;
    int n = 0;
    long trials = 0;
    std::uint64_t seed = 0;
    double root_mean = 0;
    double root_se = 0;
    double vertex_mean = 0;
    double vertex_se = 0;
    // False when trials == 1; the standard errors are then NaN.
    bool variance_defined = false;
    std::vector<double> per_k_frequencies;        // root protection >= k, k = 1..
    std::vector<double> vertex_per_k_frequencies; // chosen vertex >= k
};

empirical_summary empirical_protection(const sample_config &config);

std::string to_json(const empirical_summary &summary);

} // namespace protnum

#endif
