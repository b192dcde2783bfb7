#ifndef PROTNUM_FAMILIES_HPP
#define PROTNUM_FAMILIES_HPP

#include <cstddef>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include <protnum/bigfloat.hpp>
#include <protnum/series.hpp>

namespace protnum
{

inline constexpr std::size_t default_truncation = 256;

enum class family_kind { simply_generated, polya, non_plane_binary, complete_binary };

// How phi is given for simply generated families.
enum class weight_kind {
    polynomial,  // finite list phi_0..phi_d
    geometric,   // 1/(1-t), plane trees
    exponential, // e^t, Cayley trees
};

struct family_spec {
    family_kind kind = family_kind::simply_generated;
    weight_kind weights = weight_kind::polynomial;
    std::vector<rational> phi; // polynomial weights only
    std::string name;
};

// Built-in names in table order.
const std::vector<std::string> &builtin_family_names();

// A built-in name, or a comma-separated list of nonnegative rationals
// "phi_0,phi_1,...". Throws validation_error.
family_spec make_family(std::string_view description);

// Throws validation_error naming the violated condition.
void validate(const family_spec &family);

// True for the kinds whose size counts internal vertices only.
bool counts_internal_vertices(const family_spec &family);

// phi_0 as an exact rational (simply generated only).
rational phi_zero(const family_spec &family);

// phi, phi', phi'' at a point (simply generated only).
bigfloat phi_value(const family_spec &family, const bigfloat &t);
bigfloat phi_derivative(const family_spec &family, const bigfloat &t);
bigfloat phi_second_derivative(const family_spec &family, const bigfloat &t);
// phi(t) - phi_0 without cancellation for small t.
bigfloat phi_minus_constant_value(const family_spec &family, const bigfloat &t);

// phi(y) - phi_0 for a series y with y(0) = 0.
template <series_scalar S>
truncated_series<S> phi_minus_constant(const family_spec &family, const truncated_series<S> &y);

// sum_{i>=2} y(z^i)/i, truncated at the order of y.
template <series_scalar S>
truncated_series<S> polya_power_sum(const truncated_series<S> &y);

// Coefficients of T(z) up to z^order, exact. Plane trees use the Catalan
// closed form; everything else is a fixed point of a Newton-form operator
// (exact in rationals, so the iterates settle bit-for-bit).
rational_series tree_series(const family_spec &family, std::size_t order);

// The plain defining equation rhs(T), for residual checks: z*phi(T),
// z*exp(sum_{i>=1} T(z^i)/i), 1 + z(T^2 + T(z^2))/2, 1 + z*T^2.
rational_series defining_rhs(const family_spec &family, const rational_series &t);

struct singularity_data {
    bigfloat rho;
    bigfloat tau;
    // |tau_1| (simply generated), b (Polya), a (non-plane binary), the
    // sqrt coefficient of B (complete binary).
    bigfloat puiseux1;
    int precision = default_digits;
    // Largest truncation tail folded into rho (0 when closed-form).
    bigfloat tail_bound;
};

// Working precision in bits for `digits` requested digits.
mpfr_prec_t working_bits(int digits);

// Throws singularity_search_error, or precision_error when `order` is too
// small for the requested digits.
singularity_data find_singularity(const family_spec &family, int digits, std::size_t order = default_truncation);
// Same, reusing an already computed T(z); the truncation order is tree.order().
singularity_data find_singularity(const family_spec &family, int digits, const rational_series &tree);

struct polya_auxiliary {
    bigfloat E_at_rho;
    bigfloat E_prime_at_rho;
    std::map<int, bigfloat> Q_values; // k -> exp(sum_{i>=2} T_k(rho^i)/i)
};

} // namespace protnum

#endif
