#ifndef PROTNUM_SERIES_HPP
#define PROTNUM_SERIES_HPP

#include <algorithm>
#include <concepts>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include <protnum/bigfloat.hpp>
#include <protnum/errors.hpp>

namespace protnum
{

// Per-scalar hooks used by the series arithmetic. Exact rationals never
// round; bigfloats carry their own precision and new zeros inherit the
// precision of a "like" value.
template <typename S>
struct scalar_traits;

template <>
struct scalar_traits<rational> {
    static rational zero_like(const rational &)
    {
        return rational(0);
    }
    static rational from_long(long v, const rational &)
    {
        return rational(v);
    }
    static bool is_zero(const rational &x)
    {
        return sgn(x) == 0;
    }
    // acc += a * b
    static void fma_into(rational &acc, const rational &a, const rational &b)
    {
        acc += a * b;
    }
    static bigfloat to_bigfloat(const rational &x, mpfr_prec_t bits)
    {
        return bigfloat(x, bits);
    }
    static std::string to_string(const rational &x)
    {
        return x.get_str();
    }
};

template <>
struct scalar_traits<bigfloat> {
    static bigfloat zero_like(const bigfloat &like)
    {
        return bigfloat(like.bits());
    }
    static bigfloat from_long(long v, const bigfloat &like)
    {
        return bigfloat(v, like.bits());
    }
    static bool is_zero(const bigfloat &x)
    {
        return x.is_zero();
    }
    static void fma_into(bigfloat &acc, const bigfloat &a, const bigfloat &b)
    {
        mpfr_fma(acc.get(), a.get(), b.get(), acc.get(), MPFR_RNDN);
    }
    static bigfloat to_bigfloat(const bigfloat &x, mpfr_prec_t bits)
    {
        bigfloat out(bits);
        mpfr_set(out.get(), x.get(), MPFR_RNDN);
        return out;
    }
    static std::string to_string(const bigfloat &x)
    {
        return x.repr();
    }
};

template <typename S>
concept series_scalar = requires { sizeof(scalar_traits<S>); };

// Formal power series truncated after z^N.
//
// Holds exactly N+1 coefficients. Binary operations truncate to the smaller
// of the two operand orders, so mixing a long series with a short one never
// claims more precision than the short one has.
template <series_scalar S>
class truncated_series
{
    using traits = scalar_traits<S>;

public:
    using scalar_type = S;

    explicit truncated_series(std::vector<S> coefficients) : m_coeffs(std::move(coefficients))
    {
        if (m_coeffs.empty()) {
            throw domain_error("a truncated series needs at least one coefficient");
        }
    }

    static truncated_series zero(std::size_t order, const S &like = S{})
    {
        return truncated_series(std::vector<S>(order + 1, traits::zero_like(like)));
    }

    static truncated_series constant(const S &value, std::size_t order)
    {
        auto out = zero(order, value);
        out.m_coeffs[0] = value;
        return out;
    }

    // value * z^exponent (vanishes if exponent > order).
    static truncated_series monomial(const S &value, std::size_t exponent, std::size_t order)
    {
        auto out = zero(order, value);
        if (exponent <= order) {
            out.m_coeffs[exponent] = value;
        }
        return out;
    }

    std::size_t order() const noexcept
    {
        return m_coeffs.size() - 1;
    }

    const S &operator[](std::size_t n) const
    {
        return m_coeffs[n];
    }

    const S &at(std::size_t n) const
    {
        if (n > order()) {
            throw domain_error("coefficient index " + std::to_string(n) + " beyond truncation order "
                               + std::to_string(order()));
        }
        return m_coeffs[n];
    }

    std::span<const S> coefficients() const noexcept
    {
        return m_coeffs;
    }

    // Truncates, or zero-pads, to a new order.
    truncated_series with_order(std::size_t new_order) const
    {
        std::vector<S> out;
        out.reserve(new_order + 1);
        const auto keep = std::min(new_order, order());
        out.assign(m_coeffs.begin(), m_coeffs.begin() + static_cast<std::ptrdiff_t>(keep + 1));
        out.resize(new_order + 1, traits::zero_like(m_coeffs[0]));
        return truncated_series(std::move(out));
    }

    // Index of the first nonzero coefficient.
    std::optional<std::size_t> valuation() const
    {
        for (std::size_t n = 0; n < m_coeffs.size(); ++n) {
            if (!traits::is_zero(m_coeffs[n])) {
                return n;
            }
        }
        return std::nullopt;
    }

    // z^k * f at the same order.
    truncated_series shifted(std::size_t k) const
    {
        auto out = zero(order(), m_coeffs[0]);
        for (std::size_t n = 0; n + k <= order(); ++n) {
            out.m_coeffs[n + k] = m_coeffs[n];
        }
        return out;
    }

    // f / z^k; requires the first k coefficients to vanish. The order drops
    // by k.
    truncated_series unshifted(std::size_t k) const
    {
        if (k > order()) {
            throw domain_error("cannot divide by z^" + std::to_string(k) + " at order " + std::to_string(order()));
        }
        for (std::size_t n = 0; n < k; ++n) {
            if (!traits::is_zero(m_coeffs[n])) {
                throw domain_error("series is not divisible by z^" + std::to_string(k));
            }
        }
        return truncated_series(std::vector<S>(m_coeffs.begin() + static_cast<std::ptrdiff_t>(k), m_coeffs.end()));
    }

    // f' is known up to z^{N-1}.
    truncated_series derivative() const
    {
        if (order() == 0) {
            return zero(0, m_coeffs[0]);
        }
        std::vector<S> out;
        out.reserve(order());
        for (std::size_t n = 1; n <= order(); ++n) {
            S c = m_coeffs[n];
            c *= static_cast<long>(n);
            out.push_back(std::move(c));
        }
        return truncated_series(std::move(out));
    }

    truncated_series operator-() const
    {
        auto out = *this;
        for (auto &c : out.m_coeffs) {
            c = -c;
        }
        return out;
    }

    truncated_series &operator+=(const truncated_series &rhs)
    {
        truncate_to(rhs.order());
        for (std::size_t n = 0; n <= order(); ++n) {
            m_coeffs[n] += rhs.m_coeffs[n];
        }
        return *this;
    }

    truncated_series &operator-=(const truncated_series &rhs)
    {
        truncate_to(rhs.order());
        for (std::size_t n = 0; n <= order(); ++n) {
            m_coeffs[n] -= rhs.m_coeffs[n];
        }
        return *this;
    }

    truncated_series &operator*=(const S &scalar)
    {
        for (auto &c : m_coeffs) {
            c *= scalar;
        }
        return *this;
    }

    friend truncated_series operator+(truncated_series lhs, const truncated_series &rhs)
    {
        return lhs += rhs;
    }
    friend truncated_series operator-(truncated_series lhs, const truncated_series &rhs)
    {
        return lhs -= rhs;
    }
    friend truncated_series operator*(truncated_series lhs, const S &scalar)
    {
        return lhs *= scalar;
    }
    friend truncated_series operator*(const S &scalar, truncated_series rhs)
    {
        return rhs *= scalar;
    }

    friend truncated_series operator*(const truncated_series &a, const truncated_series &b)
    {
        const auto n = std::min(a.order(), b.order());
        auto out = zero(n, a.m_coeffs[0]);
        const auto vb = b.valuation();
        if (!vb) {
            return out;
        }
        for (std::size_t i = 0; i + *vb <= n; ++i) {
            const S &ai = a.m_coeffs[i];
            if (traits::is_zero(ai)) {
                continue;
            }
            for (std::size_t j = *vb; i + j <= n; ++j) {
                traits::fma_into(out.m_coeffs[i + j], ai, b.m_coeffs[j]);
            }
        }
        return out;
    }

    // Division by a unit (nonzero constant term).
    friend truncated_series operator/(const truncated_series &a, const truncated_series &b)
    {
        if (traits::is_zero(b.m_coeffs[0])) {
            throw unit_divisor_error("division by a series with zero constant term");
        }
        const auto n = std::min(a.order(), b.order());
        auto out = zero(n, a.m_coeffs[0]);
        const S &b0 = b.m_coeffs[0];
        for (std::size_t m = 0; m <= n; ++m) {
            // acc = -(a_m - sum_{k>=1} b_k c_{m-k})
            S acc = -a.m_coeffs[m];
            for (std::size_t k = 1; k <= m; ++k) {
                if (!traits::is_zero(b.m_coeffs[k])) {
                    traits::fma_into(acc, b.m_coeffs[k], out.m_coeffs[m - k]);
                }
            }
            acc /= b0;
            out.m_coeffs[m] = -acc;
        }
        return out;
    }

    friend bool operator==(const truncated_series &a, const truncated_series &b)
    {
        return a.m_coeffs == b.m_coeffs;
    }

private:
    void truncate_to(std::size_t n)
    {
        if (n < order()) {
            m_coeffs.resize(n + 1);
        }
    }

    std::vector<S> m_coeffs;
};

using rational_series = truncated_series<rational>;
using float_series = truncated_series<bigfloat>;

// f(z^i) truncated at the order of f.
template <series_scalar S>
truncated_series<S> substitute_power(const truncated_series<S> &f, std::size_t i)
{
    if (i < 2) {
        throw domain_error("substitute_power needs i >= 2");
    }
    auto out = truncated_series<S>::zero(f.order(), f[0]);
    std::vector<S> coeffs(out.coefficients().begin(), out.coefficients().end());
    for (std::size_t m = 0; m * i <= f.order(); ++m) {
        coeffs[m * i] = f[m];
    }
    return truncated_series<S>(std::move(coeffs));
}

// exp(f) for f with zero constant term, via g' = f' g, i.e.
// n g_n = sum_{k=1}^n k f_k g_{n-k}. Exact in rational mode.
template <series_scalar S>
truncated_series<S> series_exp(const truncated_series<S> &f)
{
    using traits = scalar_traits<S>;
    if (!traits::is_zero(f[0])) {
        throw domain_error("series_exp needs a zero constant term");
    }
    const auto n = f.order();
    std::vector<S> kf;
    kf.reserve(n + 1);
    for (std::size_t k = 0; k <= n; ++k) {
        S c = f[k];
        c *= static_cast<long>(k);
        kf.push_back(std::move(c));
    }
    std::vector<S> g(n + 1, traits::zero_like(f[0]));
    g[0] = traits::from_long(1, f[0]);
    for (std::size_t m = 1; m <= n; ++m) {
        S acc = traits::zero_like(f[0]);
        for (std::size_t k = 1; k <= m; ++k) {
            if (!traits::is_zero(kf[k])) {
                traits::fma_into(acc, kf[k], g[m - k]);
            }
        }
        acc /= static_cast<long>(m);
        g[m] = std::move(acc);
    }
    return truncated_series<S>(std::move(g));
}

// sum_j p_j f^j by Horner, truncated at the order of f.
template <series_scalar S>
truncated_series<S> compose_polynomial(std::span<const S> poly, const truncated_series<S> &f)
{
    using series = truncated_series<S>;
    if (poly.empty()) {
        return series::zero(f.order(), f[0]);
    }
    auto acc = series::constant(poly.back(), f.order());
    for (std::size_t j = poly.size() - 1; j-- > 0;) {
        acc = acc * f;
        acc += series::constant(poly[j], f.order());
    }
    return acc;
}

struct evaluation {
    bigfloat value;
    // Present when a radius of convergence was supplied.
    std::optional<bigfloat> tail_bound;
};

// Horner evaluation of the truncated polynomial at x (at x's precision).
//
// When `radius` is given, also returns the geometric tail estimate
// C q^{N+1} / (1 - q) with q = |x| / radius and C = max_n |f_n| radius^n.
template <series_scalar S>
evaluation evaluate_at(const truncated_series<S> &f, const bigfloat &x, const std::optional<bigfloat> &radius = std::nullopt)
{
    using traits = scalar_traits<S>;
    const auto bits = x.bits();
    std::optional<bigfloat> tail;
    if (radius) {
        const bigfloat q = abs(x) / *radius;
        if (!(q < 1)) {
            throw convergence_domain_error("tail guarantee requested at |x| >= radius of convergence");
        }
        bigfloat scale(1, bits);
        bigfloat c(bits);
        for (std::size_t n = 0; n <= f.order(); ++n) {
            c = max(c, abs(traits::to_bigfloat(f[n], bits)) * scale);
            scale *= *radius;
        }
        tail = c * pow(q, static_cast<unsigned long>(f.order() + 1)) / (1 - q);
    }
    bigfloat acc(bits);
    for (std::size_t n = f.order() + 1; n-- > 0;) {
        acc *= x;
        acc += traits::to_bigfloat(f[n], bits);
    }
    return {std::move(acc), std::move(tail)};
}

struct power_sum {
    bigfloat value;
    bigfloat tail_bound;
};

// sum_{i >= first} f(x^i) / i^divide_power, for f with nonnegative
// coefficients and f(0) = 0, 0 < x < radius. Terms shrink at least by
// x^v (v the valuation of f), which bounds the omitted tail; truncation
// tails of the individual evaluations are added to tail_bound.
template <series_scalar S>
power_sum sum_at_powers(const truncated_series<S> &f, const bigfloat &x, const bigfloat &radius, std::size_t first,
                        bool divide_by_index, const bigfloat &epsilon)
{
    const auto bits = x.bits();
    power_sum out{bigfloat(bits), bigfloat(bits)};
    const auto v = f.valuation();
    if (!v) {
        return out;
    }
    if (*v == 0) {
        throw domain_error("sum_at_powers needs f(0) = 0");
    }
    const bigfloat ratio = pow(x, static_cast<unsigned long>(*v));
    bigfloat xi = pow(x, static_cast<unsigned long>(first));
    for (std::size_t i = first;; ++i) {
        auto e = evaluate_at(f, xi, radius);
        bigfloat term = e.value;
        bigfloat tail = *e.tail_bound;
        if (divide_by_index) {
            term /= static_cast<long>(i);
            tail /= static_cast<long>(i);
        }
        out.value += term;
        out.tail_bound += tail;
        const bigfloat rest = abs(term) * ratio / (1 - ratio);
        if (rest < epsilon) {
            out.tail_bound += rest;
            return out;
        }
        if (i > 100000) {
            throw precision_error("sum over powers did not converge");
        }
        xi *= x;
    }
}

struct fixed_point_stats {
    std::size_t applications = 0;
};

// Fixed point of a formal contraction, truncated at `order`.
//
// Starts from the zero series. The operator must strictly increase the
// length of the common prefix of any two inputs, and must return a series
// at least as long as its input. Because the formal metric is an
// ultrametric, the common prefix of y and op(y) is exactly the correct
// prefix of y; each application is therefore evaluated only a little past
// what is already certified, which makes doubling operators cost
// O(log N) full-size applications. Throws divergence_error when the
// certified prefix stops growing or after N+2 applications.
template <series_scalar S, typename Op>
    requires std::invocable<Op &, const truncated_series<S> &>
truncated_series<S> solve_fixed_point(Op &&op, std::size_t order, const S &like = S{}, fixed_point_stats *stats = nullptr)
{
    using series = truncated_series<S>;
    series y = series::zero(0, like);
    std::size_t certified = 0;
    std::size_t gain = 1;
    std::size_t work = 0;
    for (std::size_t app = 1; app <= order + 2; ++app) {
        // Never shrink: the previous output is only trustworthy up to the
        // order it was computed at.
        work = std::max(work, std::min(order, certified + 2 * gain + 1));
        const series input = y.with_order(work);
        series output = op(input);
        if (output.order() < work) {
            throw domain_error("fixed-point operator returned a shorter series than its input");
        }
        output = output.with_order(work);
        if (stats) {
            stats->applications = app;
        }
        std::size_t agree = 0;
        while (agree <= work && input[agree] == output[agree]) {
            ++agree;
        }
        if (agree < certified) {
            throw divergence_error("fixed-point operator is not contracting: agreement prefix shrank to "
                                   + std::to_string(agree) + " after " + std::to_string(app) + " applications");
        }
        if (work == order && agree > order) {
            return input;
        }
        const auto next = std::min(agree, work) + 1;
        gain = std::max<std::size_t>(1, next - certified);
        certified = next;
        y = std::move(output);
    }
    throw divergence_error("fixed-point iteration did not settle within " + std::to_string(order + 2) + " applications");
}

// Coefficients as strings: "p/q" (or "p") for rationals, round-trip
// scientific notation for bigfloats.
template <series_scalar S>
std::vector<std::string> coefficient_strings(const truncated_series<S> &f)
{
    std::vector<std::string> out;
    out.reserve(f.order() + 1);
    for (const auto &c : f.coefficients()) {
        out.push_back(scalar_traits<S>::to_string(c));
    }
    return out;
}

// Rounds an exact series to bigfloats.
float_series to_float_series(const rational_series &f, mpfr_prec_t bits);

} // namespace protnum

#endif
