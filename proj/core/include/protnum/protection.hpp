#ifndef PROTNUM_PROTECTION_HPP
#define PROTNUM_PROTECTION_HPP

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include <protnum/bigfloat.hpp>
#include <protnum/families.hpp>
#include <protnum/series.hpp>

namespace protnum
{

enum class protection_mode { root, vertex };

std::string to_string(protection_mode mode);
protection_mode parse_mode(const std::string &text);

struct protection_options {
    int precision = default_digits;
    std::size_t truncation = default_truncation;
    int k_cap = 10000;
};

struct protection_report {
    std::string family;
    protection_mode mode = protection_mode::root;
    std::vector<bigfloat> probabilities; // P(>= k) for k = 1..k_max
    bigfloat mean;
    bigfloat variance;
    int k_max = 0;
    bigfloat tail_bound;          // on the mean
    bigfloat variance_tail_bound; // on the variance
    int precision = default_digits;
};

// S_k from T and T_k (both of order >= order + 1), truncated at `order`.
template <series_scalar S>
truncated_series<S> sk_from(const family_spec &family, const truncated_series<S> &t, const truncated_series<S> &tk,
                            std::size_t order);

// Exact S_k(z) up to z^order.
rational_series sk_series(const family_spec &family, int k, std::size_t order);

// Lazily extended tables of T_k(rho) and the limiting probabilities for one
// family at one precision. Not thread-safe; build one per thread.
class limit_model
{
public:
    explicit limit_model(family_spec family, protection_options options = {});
    limit_model(family_spec family, singularity_data sing, protection_options options = {});

    const family_spec &family() const noexcept
    {
        return m_family;
    }
    const singularity_data &singularity() const noexcept
    {
        return m_sing;
    }
    mpfr_prec_t bits() const noexcept
    {
        return m_bits;
    }

    // T_k(rho), k >= 0.
    const bigfloat &tk_value(int k);
    // lim P(X_n >= k) and lim P(Y_n >= k), k >= 1.
    const bigfloat &root_probability(int k);
    const bigfloat &vertex_probability(int k);
    // r with P(>= j+1) <= r P(>= j) for all j >= k (root mode).
    bigfloat root_ratio_bound(int k);

    // Polya only: sum_{i>=2} T_k(rho^i)/i, i.e. log Q_k(rho).
    const bigfloat &polya_log_q(int k);
    polya_auxiliary polya_data(int k_max);

    protection_report report(protection_mode mode);

    // Largest truncation tail seen in any series evaluation so far.
    const bigfloat &series_tail() const noexcept
    {
        return m_series_tail;
    }

private:
    const float_series &tk_series(int k);
    const float_series &sk_float(int k);
    void note_tail(const bigfloat &tail);
    bool uses_series() const noexcept;
    void init_series(const rational_series &tree);

    family_spec m_family;
    protection_options m_options;
    singularity_data m_sing;
    mpfr_prec_t m_bits;
    bigfloat m_eps;
    bigfloat m_series_tail;
    std::optional<float_series> m_t;
    std::vector<float_series> m_tk_series;
    std::vector<std::optional<float_series>> m_sk_series;
    std::vector<bigfloat> m_tk_values;
    std::vector<bigfloat> m_log_q;
    std::vector<bigfloat> m_root;
    std::vector<bigfloat> m_vertex;
};

// T_0(rho), ..., T_{k_max}(rho).
std::vector<bigfloat> protected_root_values(const family_spec &family, int k_max, const singularity_data &sing,
                                            std::size_t truncation = default_truncation);

// Exact T_k(rho) for the built-ins whose rho and tau are rational (plane,
// motzkin, incomplete-binary, complete-binary). Throws domain_error
// otherwise.
std::vector<rational> exact_root_values(const family_spec &family, int k_max);
rational exact_root_limit_probability(const family_spec &family, int k);

bigfloat root_limit_probability(const family_spec &family, int k, const protection_options &options = {});

protection_report root_limits(const family_spec &family, const protection_options &options = {});
protection_report vertex_limits(const family_spec &family, const protection_options &options = {});

// sum_k rho^{k-1} prod_{i<k} Q_i e^{T_i(rho)}, the second form of the Polya
// root mean.
bigfloat polya_alternative_mean(limit_model &model);

} // namespace protnum

#endif
