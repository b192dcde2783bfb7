#include <doctest.h>

#include <protnum/tree.hpp>

using namespace protnum;

namespace
{

const char *const example_tree = "(()((())(()()))(()()))";

tree path(int n)
{
    tree t = tree::leaf();
    for (int i = 1; i < n; ++i) {
        tree parent;
        parent.children.push_back(std::move(t));
        t = std::move(parent);
    }
    return t;
}

} // namespace

TEST_CASE("bracket notation round trip")
{
    for (const char *s : {"()", "(())", "(()())", example_tree}) {
        CHECK(to_string(parse_tree(s)) == s);
    }
    CHECK_THROWS(parse_tree("(()"));
    CHECK_THROWS(parse_tree("(a)"));
    CHECK_THROWS(parse_tree(""));
}

TEST_CASE("labelled example tree")
{
    const tree t = parse_tree(example_tree);
    CHECK(t.vertex_count() == 11);
    CHECK(protection_number(t) == 1);
    CHECK(vertex_protections(t) == std::vector<int>{1, 0, 2, 1, 0, 1, 0, 0, 1, 0, 0});
    CHECK(protected_count(t, 0) == 11);
    CHECK(protected_count(t, 1) == 5);
    CHECK(protected_count(t, 2) == 1);
    CHECK(protected_count(t, 3) == 0);
}

TEST_CASE("paths and leaves")
{
    CHECK(protection_number(tree::leaf()) == 0);
    CHECK(protected_count(tree::leaf(), 0) == 1);
    CHECK(protected_count(tree::leaf(), 1) == 0);
    for (int n = 1; n <= 8; ++n) {
        const tree p = path(n);
        CHECK(p.vertex_count() == static_cast<std::size_t>(n));
        CHECK(protection_number(p) == n - 1);
        for (int k = 0; k < n; ++k) {
            CHECK(protected_count(p, k) == static_cast<std::size_t>(n - k));
        }
    }
}

TEST_CASE("protection is the shortest, not the longest, path")
{
    const tree t = parse_tree("(()((())))");
    CHECK(protection_number(t) == 1);
    CHECK(t.internal_count() == 3);
}

TEST_CASE("canonical form identifies isomorphic trees")
{
    const tree a = parse_tree("((())()(()()))");
    const tree b = parse_tree("((()())()(()))");
    CHECK(a != b);
    CHECK(canonical(a) == canonical(b));
    CHECK(canonical(canonical(a)) == canonical(a));
    CHECK(protection_number(a) == protection_number(b));
}
