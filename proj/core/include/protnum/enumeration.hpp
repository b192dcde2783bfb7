#ifndef PROTNUM_ENUMERATION_HPP
#define PROTNUM_ENUMERATION_HPP

#include <cstddef>
#include <string>
#include <vector>

#include <protnum/families.hpp>
#include <protnum/series.hpp>
#include <protnum/tree.hpp>

namespace protnum
{

inline constexpr int default_brute_force_cap = 12;

// T_k from T_{k-1}.
template <series_scalar S>
truncated_series<S> next_protected_series(const family_spec &family, const truncated_series<S> &previous);

// T_0, ..., T_{k_max}, exact.
std::vector<rational_series> tk_sequence(const family_spec &family, int k_max, std::size_t order);

rational_series tk_coefficients(const family_spec &family, int k, std::size_t order);

struct weighted_tree {
    tree shape;
    rational weight;
};

// Every tree of size n (internal vertices for the binary kinds), one per
// isomorphism class for the unordered kinds, with its phi weight.
std::vector<weighted_tree> enumerate_trees(const family_spec &family, int n, int cap = default_brute_force_cap);

struct brute_force_row {
    int k = 0;
    rational trees_ge_k;      // weighted count of trees with protection >= k
    rational protected_total; // weighted total of k-protected vertices
};

struct brute_force_table {
    std::string family;
    int n = 0;
    std::vector<brute_force_row> rows; // k = 0..k_max
};

// Throws resource_error above the cap and unsupported_oracle_error for
// Cayley trees.
brute_force_table brute_force_stats(const family_spec &family, int n, int k_max = 6,
                                    int cap = default_brute_force_cap);

struct finite_probability {
    rational root;   // P(X_n >= k)
    rational vertex; // P(Y_n >= k)
};

// Exact quotients from series coefficients. Throws
// undefined_probability_error when [z^n]T = 0.
finite_probability finite_probabilities(const family_spec &family, int n, int k);

// family,n,k,trees_ge_k,protected_total
std::string oracle_csv(const std::vector<brute_force_table> &tables);

} // namespace protnum

#endif
