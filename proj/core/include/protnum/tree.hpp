#ifndef PROTNUM_TREE_HPP
#define PROTNUM_TREE_HPP

#include <compare>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace protnum
{

// Explicit rooted tree. Child order is meaningful for plane-like families
// and ignored (kept canonical) for unordered ones.
struct tree {
    std::vector<tree> children;

    static tree leaf()
    {
        return {};
    }

    bool is_leaf() const noexcept
    {
        return children.empty();
    }

    std::size_t vertex_count() const;
    std::size_t internal_count() const;

    friend bool operator==(const tree &, const tree &) = default;
    // Lexicographic on (vertex count, children); used as the canonical
    // order for unordered trees.
    friend std::strong_ordering operator<=>(const tree &a, const tree &b);
};

// Bracket notation: a leaf is "()", a node lists its children "(()())".
std::string to_string(const tree &t);
tree parse_tree(std::string_view text);

// Shortest root-to-leaf distance; 0 for a leaf.
int protection_number(const tree &t);

// Number of vertices whose fringe subtree has protection number >= k.
std::size_t protected_count(const tree &t, int k);

// Protection number of every vertex, in preorder.
std::vector<int> vertex_protections(const tree &t);

// Sorts children recursively into canonical order.
tree canonical(tree t);

} // namespace protnum

#endif
