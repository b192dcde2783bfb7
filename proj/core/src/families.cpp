#include <protnum/families.hpp>

#include <numeric>
#include <sstream>

#include <protnum/errors.hpp>

namespace protnum
{

namespace
{

struct builtin {
    const char *name;
    family_kind kind;
    weight_kind weights;
    std::vector<long> phi;
};

const std::vector<builtin> &builtins()
{
    static const std::vector<builtin> table = {
        {"plane", family_kind::simply_generated, weight_kind::geometric, {}},
        {"motzkin", family_kind::simply_generated, weight_kind::polynomial, {1, 1, 1}},
        {"incomplete-binary", family_kind::simply_generated, weight_kind::polynomial, {1, 2, 1}},
        {"cayley", family_kind::simply_generated, weight_kind::exponential, {}},
        {"complete-binary", family_kind::complete_binary, weight_kind::polynomial, {}},
        {"polya", family_kind::polya, weight_kind::polynomial, {}},
        {"non-plane-binary", family_kind::non_plane_binary, weight_kind::polynomial, {}},
    };
    return table;
}

template <series_scalar S>
S convert(const rational &q, const S &like)
{
    if constexpr (std::is_same_v<S, rational>) {
        (void)like;
        return q;
    } else {
        return bigfloat(q, like.bits());
    }
}

rational_series one(std::size_t order)
{
    return rational_series::constant(rational(1), order);
}

rational_series z(std::size_t order)
{
    return rational_series::monomial(rational(1), 1, order);
}

rational_series phi_prime_of(const family_spec &family, const rational_series &y)
{
    switch (family.weights) {
    case weight_kind::geometric: {
        const auto d = one(y.order()) - y;
        return one(y.order()) / (d * d);
    }
    case weight_kind::exponential:
        return series_exp(y);
    case weight_kind::polynomial:
        break;
    }
    std::vector<rational> dphi;
    for (std::size_t j = 1; j < family.phi.size(); ++j) {
        dphi.push_back(family.phi[j] * static_cast<long>(j));
    }
    return compose_polynomial<rational>(dphi, y);
}

rational_series newton_tree_series(const family_spec &family, std::size_t order)
{
    auto newton = [](const rational_series &y, const rational_series &g, const rational_series &jac) {
        return y + (g - y) / (one(y.order()) - jac);
    };
    switch (family.kind) {
    case family_kind::simply_generated:
        return solve_fixed_point<rational>(
            [&](const rational_series &y) {
                const auto zz = z(y.order());
                auto phi = phi_minus_constant(family, y) + rational_series::constant(phi_zero(family), y.order());
                return newton(y, zz * phi, zz * phi_prime_of(family, y));
            },
            order);
    case family_kind::polya:
        return solve_fixed_point<rational>(
            [&](const rational_series &y) {
                const auto f = z(y.order()) * series_exp(y + polya_power_sum(y));
                return newton(y, f, f);
            },
            order);
    case family_kind::non_plane_binary:
        return solve_fixed_point<rational>(
            [&](const rational_series &y) {
                const auto zz = z(y.order());
                auto g = one(y.order()) + zz * (y * y + substitute_power(y, 2)) * fraction(1, 2);
                return newton(y, g, zz * y);
            },
            order);
    case family_kind::complete_binary:
        return solve_fixed_point<rational>(
            [&](const rational_series &y) {
                const auto zz = z(y.order());
                return newton(y, one(y.order()) + zz * y * y, zz * y * rational(2));
            },
            order);
    }
    throw validation_error("unknown family kind");
}

bigfloat newton_step_guarded(bigfloat x, const bigfloat &step, const bigfloat &lo, const bigfloat &hi)
{
    bigfloat next = x - step;
    if (!(next > lo && next < hi)) {
        next = (lo + hi) / 2;
    }
    return next;
}

} // namespace

const std::vector<std::string> &builtin_family_names()
{
    static const std::vector<std::string> names = [] {
        std::vector<std::string> out;
        for (const auto &b : builtins()) {
            out.emplace_back(b.name);
        }
        return out;
    }();
    return names;
}

family_spec make_family(std::string_view description)
{
    for (const auto &b : builtins()) {
        if (description == b.name) {
            family_spec out;
            out.kind = b.kind;
            out.weights = b.weights;
            out.name = b.name;
            for (long c : b.phi) {
                out.phi.emplace_back(c);
            }
            return out;
        }
    }
    if (description.find_first_of("0123456789") != 0) {
        throw validation_error("unknown family '" + std::string(description) + "'");
    }
    family_spec out;
    out.name = "phi=" + std::string(description);
    std::stringstream in{std::string(description)};
    std::string item;
    while (std::getline(in, item, ',')) {
        rational q;
        try {
            q = rational(item);
        } catch (const std::invalid_argument &) {
            throw validation_error("cannot parse weight '" + item + "' as a rational");
        }
        q.canonicalize();
        out.phi.push_back(q);
    }
    validate(out);
    return out;
}

void validate(const family_spec &family)
{
    if (family.kind != family_kind::simply_generated || family.weights != weight_kind::polynomial) {
        return;
    }
    const auto &phi = family.phi;
    if (phi.empty()) {
        throw validation_error("phi has no coefficients");
    }
    for (const auto &c : phi) {
        if (sgn(c) < 0) {
            throw validation_error("phi has a negative coefficient");
        }
    }
    if (sgn(phi[0]) <= 0) {
        throw validation_error("phi_0 must be positive");
    }
    bool branching = false;
    unsigned long g = 0;
    for (std::size_t j = 1; j < phi.size(); ++j) {
        if (sgn(phi[j]) > 0) {
            branching = branching || j >= 2;
            g = std::gcd(g, static_cast<unsigned long>(j));
        }
    }
    if (!branching) {
        throw validation_error("phi needs some phi_j > 0 with j >= 2");
    }
    if (g != 1) {
        throw validation_error("phi is periodic (gcd of support is " + std::to_string(g) + ")");
    }
}

bool counts_internal_vertices(const family_spec &family)
{
    return family.kind == family_kind::complete_binary || family.kind == family_kind::non_plane_binary;
}

rational phi_zero(const family_spec &family)
{
    if (family.kind != family_kind::simply_generated) {
        throw domain_error("phi is defined for simply generated families only");
    }
    if (family.weights == weight_kind::polynomial) {
        return family.phi.at(0);
    }
    return rational(1);
}

bigfloat phi_value(const family_spec &family, const bigfloat &t)
{
    switch (family.weights) {
    case weight_kind::geometric:
        return 1 / (1 - t);
    case weight_kind::exponential:
        return exp(t);
    case weight_kind::polynomial:
        break;
    }
    bigfloat acc(t.bits());
    for (std::size_t j = family.phi.size(); j-- > 0;) {
        acc *= t;
        acc += bigfloat(family.phi[j], t.bits());
    }
    return acc;
}

bigfloat phi_derivative(const family_spec &family, const bigfloat &t)
{
    switch (family.weights) {
    case weight_kind::geometric: {
        const auto d = 1 - t;
        return 1 / (d * d);
    }
    case weight_kind::exponential:
        return exp(t);
    case weight_kind::polynomial:
        break;
    }
    bigfloat acc(t.bits());
    for (std::size_t j = family.phi.size(); j-- > 1;) {
        acc *= t;
        acc += bigfloat(family.phi[j] * static_cast<long>(j), t.bits());
    }
    return acc;
}

bigfloat phi_second_derivative(const family_spec &family, const bigfloat &t)
{
    switch (family.weights) {
    case weight_kind::geometric: {
        const auto d = 1 - t;
        return 2 / (d * d * d);
    }
    case weight_kind::exponential:
        return exp(t);
    case weight_kind::polynomial:
        break;
    }
    bigfloat acc(t.bits());
    for (std::size_t j = family.phi.size(); j-- > 2;) {
        acc *= t;
        acc += bigfloat(family.phi[j] * static_cast<long>(j * (j - 1)), t.bits());
    }
    return acc;
}

bigfloat phi_minus_constant_value(const family_spec &family, const bigfloat &t)
{
    switch (family.weights) {
    case weight_kind::geometric:
        return t / (1 - t);
    case weight_kind::exponential:
        return expm1(t);
    case weight_kind::polynomial:
        break;
    }
    bigfloat acc(t.bits());
    for (std::size_t j = family.phi.size(); j-- > 1;) {
        acc += bigfloat(family.phi[j], t.bits());
        acc *= t;
    }
    return acc;
}

template <series_scalar S>
truncated_series<S> phi_minus_constant(const family_spec &family, const truncated_series<S> &y)
{
    using series = truncated_series<S>;
    switch (family.weights) {
    case weight_kind::geometric:
        return y / (series::constant(convert<S>(rational(1), y[0]), y.order()) - y);
    case weight_kind::exponential:
        return series_exp(y) - series::constant(convert<S>(rational(1), y[0]), y.order());
    case weight_kind::polynomial:
        break;
    }
    std::vector<S> poly;
    poly.reserve(family.phi.size());
    poly.push_back(convert<S>(rational(0), y[0]));
    for (std::size_t j = 1; j < family.phi.size(); ++j) {
        poly.push_back(convert<S>(family.phi[j], y[0]));
    }
    return compose_polynomial<S>(poly, y);
}

template rational_series phi_minus_constant(const family_spec &, const rational_series &);
template float_series phi_minus_constant(const family_spec &, const float_series &);

template <series_scalar S>
truncated_series<S> polya_power_sum(const truncated_series<S> &y)
{
    const auto n = y.order();
    std::vector<S> acc(n + 1, scalar_traits<S>::zero_like(y[0]));
    for (std::size_t i = 2; i <= n; ++i) {
        for (std::size_t m = 1; m * i <= n; ++m) {
            if (!scalar_traits<S>::is_zero(y[m])) {
                S term = y[m];
                term /= static_cast<long>(i);
                acc[m * i] += term;
            }
        }
    }
    return truncated_series<S>(std::move(acc));
}

template rational_series polya_power_sum(const rational_series &);
template float_series polya_power_sum(const float_series &);

rational_series tree_series(const family_spec &family, std::size_t order)
{
    if (order < 1) {
        throw domain_error("tree_series needs order >= 1");
    }
    if (family.kind == family_kind::simply_generated && family.weights == weight_kind::geometric) {
        std::vector<rational> t(order + 1, rational(0));
        t[1] = 1;
        for (std::size_t n = 1; n < order; ++n) {
            t[n + 1] = t[n] * fraction(static_cast<long>(2 * (2 * n - 1)), static_cast<long>(n + 1));
        }
        return rational_series(std::move(t));
    }
    validate(family);
    return newton_tree_series(family, order);
}

rational_series defining_rhs(const family_spec &family, const rational_series &t)
{
    const auto zz = z(t.order());
    switch (family.kind) {
    case family_kind::simply_generated:
        return zz * (phi_minus_constant(family, t) + rational_series::constant(phi_zero(family), t.order()));
    case family_kind::polya:
        return zz * series_exp(t + polya_power_sum(t));
    case family_kind::non_plane_binary:
        return one(t.order()) + zz * (t * t + substitute_power(t, 2)) * fraction(1, 2);
    case family_kind::complete_binary:
        return one(t.order()) + zz * t * t;
    }
    throw validation_error("unknown family kind");
}

mpfr_prec_t working_bits(int digits)
{
    return bits_for_digits(digits + 10);
}

namespace
{

singularity_data simply_generated_singularity(const family_spec &family, int digits)
{
    const auto bits = working_bits(digits);
    const bigfloat tol = ten_to_minus(digits + 8, bits);
    auto g = [&](const bigfloat &t) { return t * phi_derivative(family, t) - phi_value(family, t); };

    bigfloat lo(bits);
    bigfloat hi(1, bits);
    if (family.weights == weight_kind::geometric) {
        hi = bigfloat::parse("0.999", bits);
    } else {
        int doublings = 0;
        while (!(g(hi) > 0)) {
            hi *= 2;
            if (++doublings > 200) {
                throw singularity_search_error("cannot bracket the root of t*phi'(t) = phi(t)");
            }
        }
    }
    bigfloat tau = (lo + hi) / 2;
    for (int it = 0;; ++it) {
        if (it > 2000) {
            throw singularity_search_error("Newton iteration for tau did not converge");
        }
        const bigfloat value = g(tau);
        if (value > 0) {
            hi = tau;
        } else {
            lo = tau;
        }
        const bigfloat slope = tau * phi_second_derivative(family, tau);
        if (slope.is_zero()) {
            tau = (lo + hi) / 2;
            continue;
        }
        const bigfloat step = value / slope;
        const bigfloat next = newton_step_guarded(tau, step, lo, hi);
        const bool done = abs(next - tau) < tol * tau;
        tau = next;
        if (done) {
            break;
        }
    }
    singularity_data out{tau / phi_value(family, tau), tau,
                         sqrt(2 * phi_value(family, tau) / phi_second_derivative(family, tau)), digits, bigfloat(bits)};
    return out;
}

void check_tail(const bigfloat &tail, int digits, std::size_t order)
{
    if (tail > ten_to_minus(digits + 2, tail.bits())) {
        throw precision_error("truncation order " + std::to_string(order) + " cannot certify " + std::to_string(digits)
                              + " digits; raise --trunc");
    }
}

singularity_data polya_singularity(int digits, const rational_series &tree)
{
    const auto order = tree.order();
    const auto bits = working_bits(digits);
    const auto t = to_float_series(tree, bits);
    const auto zt_prime = t.derivative().shifted(1);
    const bigfloat eps = ten_to_minus(digits + 12, bits);
    const bigfloat tol = ten_to_minus(digits + 8, bits);

    // Newton on h(rho) = log(rho) + 1 + E(rho), the condition T(rho) = 1.
    bigfloat rho = bigfloat::parse("0.33", bits);
    bigfloat tail(bits);
    bigfloat e_prime(bits);
    for (int it = 0;; ++it) {
        if (it > 200) {
            throw singularity_search_error("iteration for the Polya singularity did not converge");
        }
        const auto e = sum_at_powers(t, rho, rho, 2, true, eps);
        const auto ep = sum_at_powers(zt_prime, rho, rho, 2, false, eps);
        e_prime = ep.value / rho;
        tail = e.tail_bound + ep.tail_bound;
        const bigfloat h = log(rho) + 1 + e.value;
        const bigfloat slope = 1 / rho + e_prime;
        const bigfloat next = rho - h / slope;
        const bool done = abs(next - rho) < tol;
        rho = next;
        if (done) {
            break;
        }
    }
    check_tail(tail, digits, order);
    const auto ep = sum_at_powers(zt_prime, rho, rho, 2, false, eps);
    e_prime = ep.value / rho;
    return {rho, bigfloat(1, bits), sqrt(2 * (1 + rho * e_prime)), digits, tail};
}

singularity_data non_plane_binary_singularity(int digits, const rational_series &tree)
{
    const auto order = tree.order();
    const auto bits = working_bits(digits);
    const auto t = to_float_series(tree, bits);
    const auto t_prime = t.derivative();
    const bigfloat tol = ten_to_minus(digits + 8, bits);

    // Newton on h(rho) = rho (2 + rho T(rho^2)) - 1, the condition rho T(rho) = 1.
    bigfloat rho = bigfloat::parse("0.4", bits);
    bigfloat tail(bits);
    for (int it = 0;; ++it) {
        if (it > 200) {
            throw singularity_search_error("iteration for the non-plane binary singularity did not converge");
        }
        const bigfloat r2 = rho * rho;
        const auto v = evaluate_at(t, r2, rho);
        const auto d = evaluate_at(t_prime, r2, rho);
        tail = *v.tail_bound + *d.tail_bound;
        const bigfloat h = rho * (2 + rho * v.value) - 1;
        const bigfloat slope = 2 + 2 * rho * v.value + 2 * rho * r2 * d.value;
        const bigfloat next = rho - h / slope;
        const bool done = abs(next - rho) < tol;
        rho = next;
        if (done) {
            break;
        }
    }
    check_tail(tail, digits, order);
    const bigfloat r2 = rho * rho;
    const bigfloat tau = 1 / rho;
    const bigfloat t2 = evaluate_at(t, r2).value;
    const bigfloat dt2 = evaluate_at(t_prime, r2).value;
    return {rho, tau, sqrt(tau * tau + t2 + 2 * r2 * dt2), digits, tail};
}

} // namespace

singularity_data find_singularity(const family_spec &family, int digits, std::size_t order)
{
    if (family.kind == family_kind::polya || family.kind == family_kind::non_plane_binary) {
        return find_singularity(family, digits, tree_series(family, order));
    }
    return find_singularity(family, digits, rational_series::zero(0));
}

singularity_data find_singularity(const family_spec &family, int digits, const rational_series &tree)
{
    if (digits < 1) {
        throw domain_error("precision must be at least one digit");
    }
    switch (family.kind) {
    case family_kind::simply_generated:
        validate(family);
        return simply_generated_singularity(family, digits);
    case family_kind::polya:
        return polya_singularity(digits, tree);
    case family_kind::non_plane_binary:
        return non_plane_binary_singularity(digits, tree);
    case family_kind::complete_binary: {
        const auto bits = working_bits(digits);
        return {bigfloat(fraction(1, 4), bits), bigfloat(2, bits), bigfloat(2, bits), digits, bigfloat(bits)};
    }
    }
    throw validation_error("unknown family kind");
}

} // namespace protnum
