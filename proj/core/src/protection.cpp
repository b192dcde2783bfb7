#include <protnum/protection.hpp>

#include <map>

#include <protnum/enumeration.hpp>
#include <protnum/errors.hpp>

namespace protnum
{

std::string to_string(protection_mode mode)
{
    return mode == protection_mode::root ? "root" : "vertex";
}

protection_mode parse_mode(const std::string &text)
{
    if (text == "root") {
        return protection_mode::root;
    }
    if (text == "vertex") {
        return protection_mode::vertex;
    }
    throw domain_error("mode must be root or vertex, not '" + text + "'");
}

namespace
{

// sum_{i>=2} f(z^i)
template <series_scalar S>
truncated_series<S> power_substitution_sum(const truncated_series<S> &f)
{
    const auto n = f.order();
    std::vector<S> acc(n + 1, scalar_traits<S>::zero_like(f[0]));
    for (std::size_t i = 2; i <= n; ++i) {
        for (std::size_t m = 0; m * i <= n; ++m) {
            if (!scalar_traits<S>::is_zero(f[m])) {
                acc[m * i] += f[m];
            }
        }
    }
    return truncated_series<S>(std::move(acc));
}

template <series_scalar S>
S scalar_from(const rational &q, const S &like)
{
    if constexpr (std::is_same_v<S, rational>) {
        (void)like;
        return q;
    } else {
        return bigfloat(q, like.bits());
    }
}

} // namespace

template <series_scalar S>
truncated_series<S> sk_from(const family_spec &family, const truncated_series<S> &t, const truncated_series<S> &tk,
                            std::size_t order)
{
    using series = truncated_series<S>;
    if (t.order() < order + 1 || tk.order() < order + 1) {
        throw domain_error("sk_from needs T and T_k to order N+1");
    }
    const S &like = tk[0];
    const S unit = scalar_traits<S>::from_long(1, like);
    switch (family.kind) {
    case family_kind::simply_generated: {
        // S_k = T_k T' phi_0 / (T/z)
        auto out = tk * t.derivative() / t.unshifted(1);
        out *= scalar_from<S>(phi_zero(family), like);
        return out.with_order(order);
    }
    case family_kind::complete_binary:
        // Marking one of the leaves: S_k = T_k B' / B^2.
        return (tk * t.derivative() / (t * t)).with_order(order);
    case family_kind::polya: {
        const auto tt = t.with_order(order);
        const auto tkk = tk.with_order(order);
        const auto w = series::constant(unit, order) / (series::constant(unit, order) - tt);
        return solve_fixed_point<S>(
            [&](const series &f) {
                const auto m = f.order();
                return (tt.with_order(m) * power_substitution_sum(f) + tkk.with_order(m)) * w.with_order(m);
            },
            order, like);
    }
    case family_kind::non_plane_binary: {
        const auto tkk = tk.with_order(order);
        const auto zt = t.with_order(order).shifted(1);
        const auto w = series::constant(unit, order) / (series::constant(unit, order) - zt);
        return solve_fixed_point<S>(
            [&](const series &f) {
                const auto m = f.order();
                return (substitute_power(f, 2).shifted(1) + tkk.with_order(m)) * w.with_order(m);
            },
            order, like);
    }
    }
    throw validation_error("unknown family kind");
}

template rational_series sk_from(const family_spec &, const rational_series &, const rational_series &, std::size_t);
template float_series sk_from(const family_spec &, const float_series &, const float_series &, std::size_t);

rational_series sk_series(const family_spec &family, int k, std::size_t order)
{
    if (k < 1) {
        throw domain_error("S_k needs k >= 1");
    }
    const auto seq = tk_sequence(family, k, order + 1);
    return sk_from(family, seq.front(), seq.back(), order);
}

namespace
{

bool needs_series(const family_spec &family)
{
    return family.kind == family_kind::polya || family.kind == family_kind::non_plane_binary;
}

rational_series model_tree(const family_spec &family, std::size_t truncation)
{
    return needs_series(family) ? tree_series(family, truncation + 1) : rational_series::zero(0);
}

} // namespace

limit_model::limit_model(family_spec family, protection_options options)
    : m_family(std::move(family)), m_options(options), m_bits(working_bits(options.precision)),
      m_eps(ten_to_minus(options.precision + 2, m_bits)), m_series_tail(m_bits)
{
    const auto tree = model_tree(m_family, m_options.truncation);
    m_sing = needs_series(m_family) ? find_singularity(m_family, m_options.precision, tree.with_order(m_options.truncation))
                                    : find_singularity(m_family, m_options.precision, m_options.truncation);
    init_series(tree);
}

limit_model::limit_model(family_spec family, singularity_data sing, protection_options options)
    : m_family(std::move(family)), m_options(options), m_sing(std::move(sing)), m_bits(working_bits(options.precision)),
      m_eps(ten_to_minus(options.precision + 2, m_bits)), m_series_tail(m_bits)
{
    init_series(model_tree(m_family, m_options.truncation));
}

void limit_model::init_series(const rational_series &tree)
{
    note_tail(m_sing.tail_bound);
    if (uses_series()) {
        m_t = to_float_series(tree, m_bits);
        m_tk_series.push_back(*m_t);
    }
    m_tk_values.push_back(m_sing.tau);
}

bool limit_model::uses_series() const noexcept
{
    return m_family.kind == family_kind::polya || m_family.kind == family_kind::non_plane_binary;
}

void limit_model::note_tail(const bigfloat &tail)
{
    m_series_tail = max(m_series_tail, tail);
}

const float_series &limit_model::tk_series(int k)
{
    while (m_tk_series.size() <= static_cast<std::size_t>(k)) {
        auto next = next_protected_series(m_family, m_tk_series.back());
        m_tk_series.push_back(std::move(next));
    }
    return m_tk_series[static_cast<std::size_t>(k)];
}

const float_series &limit_model::sk_float(int k)
{
    const auto idx = static_cast<std::size_t>(k);
    if (m_sk_series.size() <= idx) {
        m_sk_series.resize(idx + 1);
    }
    if (!m_sk_series[idx]) {
        m_sk_series[idx] = sk_from(m_family, *m_t, tk_series(k), m_options.truncation);
    }
    return *m_sk_series[idx];
}

const bigfloat &limit_model::polya_log_q(int k)
{
    if (m_family.kind != family_kind::polya) {
        throw domain_error("Q_k is defined for Polya trees only");
    }
    while (m_log_q.size() <= static_cast<std::size_t>(k)) {
        const int j = static_cast<int>(m_log_q.size());
        const auto &rho = m_sing.rho;
        auto sum = sum_at_powers(tk_series(j), rho, rho, 2, true, ten_to_minus(m_options.precision + 8, m_bits));
        note_tail(sum.tail_bound);
        m_log_q.push_back(std::move(sum.value));
    }
    return m_log_q[static_cast<std::size_t>(k)];
}

const bigfloat &limit_model::tk_value(int k)
{
    if (k < 0) {
        throw domain_error("k must be nonnegative");
    }
    const auto &rho = m_sing.rho;
    while (m_tk_values.size() <= static_cast<std::size_t>(k)) {
        const int j = static_cast<int>(m_tk_values.size()) - 1;
        const bigfloat prev = m_tk_values.back();
        bigfloat next(m_bits);
        switch (m_family.kind) {
        case family_kind::simply_generated:
            next = rho * phi_minus_constant_value(m_family, prev);
            break;
        case family_kind::complete_binary:
            next = rho * prev * prev;
            break;
        case family_kind::polya:
            next = rho * expm1(prev + polya_log_q(j));
            break;
        case family_kind::non_plane_binary: {
            const auto at_square = evaluate_at(tk_series(j), rho * rho, rho);
            note_tail(*at_square.tail_bound);
            next = rho * (prev * prev + at_square.value) / 2;
            break;
        }
        }
        m_tk_values.push_back(std::move(next));
    }
    return m_tk_values[static_cast<std::size_t>(k)];
}

bigfloat limit_model::root_ratio_bound(int k)
{
    const auto &rho = m_sing.rho;
    switch (m_family.kind) {
    case family_kind::simply_generated:
        return rho * phi_derivative(m_family, tk_value(k));
    case family_kind::complete_binary:
        return 2 * rho * tk_value(k);
    case family_kind::polya:
        return tk_value(k + 1) + rho;
    case family_kind::non_plane_binary:
        return rho * tk_value(k);
    }
    throw validation_error("unknown family kind");
}

const bigfloat &limit_model::root_probability(int k)
{
    if (k < 1) {
        throw domain_error("protection level k must be at least 1");
    }
    while (m_root.size() < static_cast<std::size_t>(k)) {
        const int next_k = static_cast<int>(m_root.size()) + 1;
        if (next_k == 1) {
            switch (m_family.kind) {
            case family_kind::complete_binary:
                m_root.push_back(2 * m_sing.rho * tk_value(0));
                break;
            case family_kind::polya:
                m_root.push_back(tk_value(1) + m_sing.rho);
                break;
            default:
                m_root.push_back(bigfloat(1, m_bits));
                break;
            }
            continue;
        }
        const bigfloat prev = m_root.back();
        m_root.push_back(prev * root_ratio_bound(next_k - 1));
    }
    return m_root[static_cast<std::size_t>(k) - 1];
}

const bigfloat &limit_model::vertex_probability(int k)
{
    if (k < 1) {
        throw domain_error("protection level k must be at least 1");
    }
    const auto &rho = m_sing.rho;
    while (m_vertex.size() < static_cast<std::size_t>(k)) {
        const int j = static_cast<int>(m_vertex.size()) + 1;
        bigfloat p(m_bits);
        switch (m_family.kind) {
        case family_kind::simply_generated:
            p = bigfloat(phi_zero(m_family), m_bits) * tk_value(j) / m_sing.tau;
            break;
        case family_kind::complete_binary:
            p = tk_value(j) / (rho * m_sing.tau * m_sing.tau);
            break;
        case family_kind::polya: {
            auto sum = sum_at_powers(sk_float(j), rho, rho, 2, false, ten_to_minus(m_options.precision + 8, m_bits));
            note_tail(sum.tail_bound);
            const auto &b = m_sing.puiseux1;
            p = 2 * (sum.value + tk_value(j)) / (b * b);
            break;
        }
        case family_kind::non_plane_binary: {
            const auto at_square = evaluate_at(sk_float(j), rho * rho, rho);
            note_tail(*at_square.tail_bound);
            const auto &a = m_sing.puiseux1;
            p = 2 * (rho * at_square.value + tk_value(j)) / (a * a * rho);
            break;
        }
        }
        m_vertex.push_back(std::move(p));
    }
    return m_vertex[static_cast<std::size_t>(k) - 1];
}

polya_auxiliary limit_model::polya_data(int k_max)
{
    polya_auxiliary out{polya_log_q(0), bigfloat(m_bits), {}};
    const auto &rho = m_sing.rho;
    const auto zt_prime = m_t->derivative().shifted(1);
    out.E_prime_at_rho =
        sum_at_powers(zt_prime, rho, rho, 2, false, ten_to_minus(m_options.precision + 8, m_bits)).value / rho;
    for (int k = 0; k <= k_max; ++k) {
        out.Q_values.emplace(k, exp(polya_log_q(k)));
    }
    return out;
}

protection_report limit_model::report(protection_mode mode)
{
    const int digits = m_options.precision;
    protection_report out;
    out.family = m_family.name;
    out.mode = mode;
    out.precision = digits;
    bigfloat mean(m_bits);
    bigfloat second(m_bits);
    bigfloat mean_tail(m_bits);
    bigfloat second_tail(m_bits);
    bool settled = false;
    for (int k = 1; k <= m_options.k_cap; ++k) {
        const bigfloat p = mode == protection_mode::root ? root_probability(k) : vertex_probability(k);
        mean += p;
        second += (2 * k - 1) * p;
        out.probabilities.push_back(p);

        bigfloat r(m_bits);
        if (mode == protection_mode::root) {
            r = root_ratio_bound(k);
        } else {
            switch (m_family.kind) {
            case family_kind::simply_generated:
                r = root_ratio_bound(k);
                break;
            case family_kind::complete_binary:
                r = m_sing.rho * tk_value(k);
                break;
            default:
                r = root_ratio_bound(k);
                if (k >= 2 && !out.probabilities[k - 2].is_zero()) {
                    r = max(r, p / out.probabilities[k - 2]);
                }
                break;
            }
        }
        if (!(r < 1) || k < 2) {
            continue;
        }
        const bigfloat geo = r / (1 - r);
        mean_tail = p * geo;
        second_tail = p * ((2 * k - 1) * geo + 2 * geo / (1 - r));
        if (mean_tail < m_eps && second_tail < m_eps) {
            out.k_max = k;
            settled = true;
            break;
        }
    }
    if (!settled) {
        throw precision_error("probabilities did not reach 1e-" + std::to_string(digits + 2) + " within k <= "
                              + std::to_string(m_options.k_cap));
    }
    if (m_series_tail > m_eps) {
        throw precision_error("truncation order " + std::to_string(m_options.truncation) + " cannot certify "
                              + std::to_string(digits) + " digits; raise --trunc");
    }
    out.mean = mean;
    out.tail_bound = mean_tail + m_series_tail;
    out.variance = second - mean * mean;
    out.variance_tail_bound = second_tail + 2 * mean * out.tail_bound + out.tail_bound * out.tail_bound;
    if (out.variance < 0) {
        if (-out.variance <= out.variance_tail_bound + ten_to_minus(digits, m_bits)) {
            out.variance = bigfloat(m_bits);
        } else {
            throw internal_consistency_error("negative variance " + out.variance.str(10) + " for " + m_family.name);
        }
    }
    return out;
}

std::vector<bigfloat> protected_root_values(const family_spec &family, int k_max, const singularity_data &sing,
                                            std::size_t truncation)
{
    if (k_max < 1) {
        throw domain_error("k_max must be at least 1");
    }
    limit_model model(family, sing, {sing.precision, truncation});
    std::vector<bigfloat> out;
    for (int k = 0; k <= k_max; ++k) {
        out.push_back(model.tk_value(k));
    }
    return out;
}

namespace
{

struct exact_point {
    rational rho;
    rational tau;
};

exact_point exact_singularity(const family_spec &family)
{
    static const std::map<std::string, std::pair<rational, rational>> table = {
        {"plane", {fraction(1, 4), fraction(1, 2)}},
        {"motzkin", {fraction(1, 3), fraction(1, 1)}},
        {"incomplete-binary", {fraction(1, 4), fraction(1, 1)}},
        {"complete-binary", {fraction(1, 4), fraction(2, 1)}},
    };
    const auto it = table.find(family.name);
    if (it == table.end()) {
        throw domain_error("no rational singularity is known for " + family.name);
    }
    return {it->second.first, it->second.second};
}

rational exact_phi_minus_constant(const family_spec &family, const rational &t)
{
    if (family.weights == weight_kind::geometric) {
        return t / (1 - t);
    }
    rational acc(0);
    for (std::size_t j = family.phi.size(); j-- > 1;) {
        acc = (acc + family.phi[j]) * t;
    }
    return acc;
}

rational exact_phi_derivative(const family_spec &family, const rational &t)
{
    if (family.weights == weight_kind::geometric) {
        return 1 / ((1 - t) * (1 - t));
    }
    rational acc(0);
    for (std::size_t j = family.phi.size(); j-- > 1;) {
        acc = acc * t + family.phi[j] * static_cast<long>(j);
    }
    return acc;
}

} // namespace

std::vector<rational> exact_root_values(const family_spec &family, int k_max)
{
    const auto [rho, tau] = exact_singularity(family);
    std::vector<rational> out{tau};
    for (int k = 1; k <= k_max; ++k) {
        const rational &prev = out.back();
        if (family.kind == family_kind::complete_binary) {
            out.push_back(rho * prev * prev);
        } else {
            out.push_back(rho * exact_phi_minus_constant(family, prev));
        }
    }
    return out;
}

rational exact_root_limit_probability(const family_spec &family, int k)
{
    if (k < 1) {
        throw domain_error("protection level k must be at least 1");
    }
    const auto rho = exact_singularity(family).rho;
    const auto values = exact_root_values(family, k);
    rational p(1);
    if (family.kind == family_kind::complete_binary) {
        for (int i = 0; i < k; ++i) {
            p *= 2 * rho * values[static_cast<std::size_t>(i)];
        }
        return p;
    }
    for (int i = 1; i < k; ++i) {
        p *= rho * exact_phi_derivative(family, values[static_cast<std::size_t>(i)]);
    }
    return p;
}

bigfloat root_limit_probability(const family_spec &family, int k, const protection_options &options)
{
    limit_model model(family, options);
    return model.root_probability(k);
}

protection_report root_limits(const family_spec &family, const protection_options &options)
{
    limit_model model(family, options);
    return model.report(protection_mode::root);
}

protection_report vertex_limits(const family_spec &family, const protection_options &options)
{
    limit_model model(family, options);
    return model.report(protection_mode::vertex);
}

bigfloat polya_alternative_mean(limit_model &model)
{
    const auto &rho = model.singularity().rho;
    const bigfloat eps = ten_to_minus(model.singularity().precision + 2, model.bits());
    bigfloat term(1, model.bits());
    bigfloat sum = term;
    for (int k = 1; k < 100000; ++k) {
        term *= rho * exp(model.polya_log_q(k) + model.tk_value(k));
        sum += term;
        const bigfloat r = model.root_ratio_bound(k + 1);
        if (term * r / (1 - r) < eps) {
            return sum;
        }
    }
    throw precision_error("alternative mean did not converge");
}

} // namespace protnum
