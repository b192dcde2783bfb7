#include <protnum/tree.hpp>

#include <algorithm>
#include <climits>

#include <protnum/errors.hpp>

namespace protnum
{

std::size_t tree::vertex_count() const
{
    std::size_t n = 1;
    for (const auto &c : children) {
        n += c.vertex_count();
    }
    return n;
}

std::size_t tree::internal_count() const
{
    if (children.empty()) {
        return 0;
    }
    std::size_t n = 1;
    for (const auto &c : children) {
        n += c.internal_count();
    }
    return n;
}

std::strong_ordering operator<=>(const tree &a, const tree &b)
{
    if (auto c = a.vertex_count() <=> b.vertex_count(); c != 0) {
        return c;
    }
    return std::lexicographical_compare_three_way(a.children.begin(), a.children.end(), b.children.begin(),
                                                  b.children.end());
}

std::string to_string(const tree &t)
{
    std::string out = "(";
    for (const auto &c : t.children) {
        out += to_string(c);
    }
    out += ')';
    return out;
}

namespace
{

tree parse_at(std::string_view text, std::size_t &pos)
{
    if (pos >= text.size() || text[pos] != '(') {
        throw error("malformed tree at offset " + std::to_string(pos));
    }
    ++pos;
    tree t;
    while (pos < text.size() && text[pos] == '(') {
        t.children.push_back(parse_at(text, pos));
    }
    if (pos >= text.size() || text[pos] != ')') {
        throw error("malformed tree at offset " + std::to_string(pos));
    }
    ++pos;
    return t;
}

int collect(const tree &t, std::vector<int> &out)
{
    const auto slot = out.size();
    out.push_back(0);
    if (t.children.empty()) {
        return 0;
    }
    int best = INT_MAX;
    for (const auto &c : t.children) {
        best = std::min(best, collect(c, out));
    }
    out[slot] = best + 1;
    return best + 1;
}

} // namespace

tree parse_tree(std::string_view text)
{
    std::size_t pos = 0;
    tree t = parse_at(text, pos);
    if (pos != text.size()) {
        throw error("trailing characters after tree");
    }
    return t;
}

int protection_number(const tree &t)
{
    if (t.children.empty()) {
        return 0;
    }
    int best = INT_MAX;
    for (const auto &c : t.children) {
        best = std::min(best, protection_number(c));
    }
    return best + 1;
}

std::vector<int> vertex_protections(const tree &t)
{
    std::vector<int> out;
    collect(t, out);
    return out;
}

std::size_t protected_count(const tree &t, int k)
{
    const auto all = vertex_protections(t);
    return static_cast<std::size_t>(std::count_if(all.begin(), all.end(), [k](int p) { return p >= k; }));
}

tree canonical(tree t)
{
    for (auto &c : t.children) {
        c = canonical(std::move(c));
    }
    std::sort(t.children.begin(), t.children.end());
    return t;
}

} // namespace protnum
