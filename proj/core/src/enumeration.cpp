#include <protnum/enumeration.hpp>

#include <functional>
#include <sstream>

#include <protnum/errors.hpp>
#include <protnum/protection.hpp>

namespace protnum
{

template <series_scalar S>
truncated_series<S> next_protected_series(const family_spec &family, const truncated_series<S> &previous)
{
    using traits = scalar_traits<S>;
    using series = truncated_series<S>;
    const auto n = previous.order();
    const S unit = traits::from_long(1, previous[0]);
    const auto z = series::monomial(unit, 1, n);
    switch (family.kind) {
    case family_kind::simply_generated:
        return z * phi_minus_constant(family, previous);
    case family_kind::polya:
        return z * series_exp(previous + polya_power_sum(previous)) - z;
    case family_kind::non_plane_binary: {
        S half = unit;
        half /= 2L;
        return z * (previous * previous + substitute_power(previous, 2)) * half;
    }
    case family_kind::complete_binary:
        return z * (previous * previous);
    }
    throw validation_error("unknown family kind");
}

template rational_series next_protected_series(const family_spec &, const rational_series &);
template float_series next_protected_series(const family_spec &, const float_series &);

std::vector<rational_series> tk_sequence(const family_spec &family, int k_max, std::size_t order)
{
    if (k_max < 0) {
        throw domain_error("k must be nonnegative");
    }
    std::vector<rational_series> out;
    out.reserve(static_cast<std::size_t>(k_max) + 1);
    out.push_back(tree_series(family, order));
    for (int k = 1; k <= k_max; ++k) {
        out.push_back(next_protected_series(family, out.back()));
    }
    return out;
}

rational_series tk_coefficients(const family_spec &family, int k, std::size_t order)
{
    return tk_sequence(family, k, order).back();
}

namespace
{

using by_size = std::vector<std::vector<weighted_tree>>;

void plane_forests(const by_size &smaller, std::size_t size_left, int children_left, tree &node, const rational &weight,
                   std::vector<weighted_tree> &out)
{
    if (children_left == 0) {
        if (size_left == 0) {
            out.push_back({node, weight});
        }
        return;
    }
    for (std::size_t s = 1; s + static_cast<std::size_t>(children_left - 1) <= size_left; ++s) {
        for (const auto &child : smaller[s]) {
            node.children.push_back(child.shape);
            plane_forests(smaller, size_left - s, children_left - 1, node, weight * child.weight, out);
            node.children.pop_back();
        }
    }
}

void unordered_forests(const by_size &smaller, std::size_t size_left, std::size_t min_size, std::size_t min_index,
                       tree &node, std::vector<weighted_tree> &out)
{
    if (size_left == 0) {
        out.push_back({node, rational(1)});
        return;
    }
    for (std::size_t s = min_size; s <= size_left; ++s) {
        const auto first = (s == min_size) ? min_index : 0;
        for (std::size_t i = first; i < smaller[s].size(); ++i) {
            node.children.push_back(smaller[s][i].shape);
            unordered_forests(smaller, size_left - s, s, i, node, out);
            node.children.pop_back();
        }
    }
}

std::vector<weighted_tree> plane_level(const family_spec &family, const by_size &smaller, std::size_t n)
{
    std::vector<weighted_tree> out;
    const bool geometric = family.weights == weight_kind::geometric;
    const std::size_t max_degree = geometric ? n - 1 : family.phi.size() - 1;
    for (std::size_t j = 0; j <= max_degree && j < n; ++j) {
        const rational w = geometric ? rational(1) : family.phi[j];
        if (sgn(w) == 0 || (j == 0) != (n == 1)) {
            continue;
        }
        tree node;
        plane_forests(smaller, n - 1, static_cast<int>(j), node, w, out);
    }
    return out;
}

std::vector<weighted_tree> binary_level(const by_size &smaller, std::size_t n, bool ordered)
{
    std::vector<weighted_tree> out;
    for (std::size_t s1 = 0; s1 <= n - 1; ++s1) {
        const auto s2 = n - 1 - s1;
        if (!ordered && s1 > s2) {
            break;
        }
        for (std::size_t i = 0; i < smaller[s1].size(); ++i) {
            const auto first = (!ordered && s1 == s2) ? i : 0;
            for (std::size_t j = first; j < smaller[s2].size(); ++j) {
                tree node;
                node.children = {smaller[s1][i].shape, smaller[s2][j].shape};
                out.push_back({std::move(node), rational(1)});
            }
        }
    }
    return out;
}

} // namespace

std::vector<weighted_tree> enumerate_trees(const family_spec &family, int n, int cap)
{
    if (n > cap) {
        throw resource_error("brute-force size " + std::to_string(n) + " exceeds the cap " + std::to_string(cap));
    }
    if (family.kind == family_kind::simply_generated && family.weights == weight_kind::exponential) {
        throw unsupported_oracle_error("labelled trees are not enumerated; use the series identities instead");
    }
    const bool binary = counts_internal_vertices(family);
    if (n < (binary ? 0 : 1)) {
        return {};
    }
    by_size levels;
    if (binary) {
        levels.push_back({{tree::leaf(), rational(1)}});
    } else {
        levels.emplace_back();
    }
    for (std::size_t s = levels.size(); s <= static_cast<std::size_t>(n); ++s) {
        switch (family.kind) {
        case family_kind::simply_generated:
            levels.push_back(plane_level(family, levels, s));
            break;
        case family_kind::polya: {
            std::vector<weighted_tree> out;
            tree node;
            unordered_forests(levels, s - 1, 1, 0, node, out);
            levels.push_back(std::move(out));
            break;
        }
        case family_kind::non_plane_binary:
            levels.push_back(binary_level(levels, s, false));
            break;
        case family_kind::complete_binary:
            levels.push_back(binary_level(levels, s, true));
            break;
        }
    }
    return levels[static_cast<std::size_t>(n)];
}

brute_force_table brute_force_stats(const family_spec &family, int n, int k_max, int cap)
{
    brute_force_table table{family.name, n, {}};
    for (int k = 0; k <= k_max; ++k) {
        table.rows.push_back({k, rational(0), rational(0)});
    }
    for (const auto &[shape, weight] : enumerate_trees(family, n, cap)) {
        const auto prot = vertex_protections(shape);
        for (int k = 0; k <= k_max; ++k) {
            auto &row = table.rows[static_cast<std::size_t>(k)];
            if (prot.front() >= k) {
                row.trees_ge_k += weight;
            }
            long count = 0;
            for (int p : prot) {
                count += (p >= k) ? 1 : 0;
            }
            row.protected_total += weight * count;
        }
    }
    return table;
}

finite_probability finite_probabilities(const family_spec &family, int n, int k)
{
    if (n < 1) {
        throw undefined_probability_error("no trees of size " + std::to_string(n));
    }
    if (k < 0) {
        throw domain_error("k must be nonnegative");
    }
    const auto order = static_cast<std::size_t>(n);
    const auto seq = tk_sequence(family, k, order + 1);
    const rational &total = seq.front()[order];
    if (sgn(total) == 0) {
        throw undefined_probability_error("[z^" + std::to_string(n) + "]T(z) is zero");
    }
    if (k == 0) {
        return {rational(1), rational(1)};
    }
    const auto sk = sk_from(family, seq.front(), seq.back(), order);
    rational root = seq.back()[order] / total;
    rational vertex = sk[order] / (total * static_cast<long>(n));
    return {root, vertex};
}

std::string oracle_csv(const std::vector<brute_force_table> &tables)
{
    std::ostringstream out;
    out << "family,n,k,trees_ge_k,protected_total\n";
    for (const auto &t : tables) {
        for (const auto &row : t.rows) {
            out << t.family << ',' << t.n << ',' << row.k << ',' << row.trees_ge_k.get_str() << ','
                << row.protected_total.get_str() << '\n';
        }
    }
    return out.str();
}

} // namespace protnum
