#ifndef PROTNUM_BIGFLOAT_HPP
#define PROTNUM_BIGFLOAT_HPP

#include <compare>
#include <string>
#include <string_view>

#include <gmpxx.h>
#include <mpfr.h>

namespace protnum
{

using rational = mpq_class;

// p/q in canonical form.
inline rational fraction(long p, long q)
{
    rational r{mpz_class(p), mpz_class(q)};
    r.canonicalize();
    return r;
}

// Decimal digits used when the caller does not ask for a precision.
inline constexpr int default_digits = 64;

// Binary precision that represents `digits` decimal digits, plus a few
// guard bits.
mpfr_prec_t bits_for_digits(int digits);

// Arbitrary-precision binary float with a per-value precision.
//
// Unlike a global-default-precision type every value carries its own
// precision; binary operations round to the larger of the two operand
// precisions. Values are plain RAII objects with value semantics, so they
// can be moved across threads freely.
class bigfloat
{
public:
    bigfloat();
    explicit bigfloat(mpfr_prec_t bits);
    bigfloat(long value, mpfr_prec_t bits);
    bigfloat(const rational &value, mpfr_prec_t bits);

    // Parses a decimal string ("1.25", "-3e-7"). Throws protnum::error on
    // malformed input.
    static bigfloat parse(std::string_view text, mpfr_prec_t bits);

    bigfloat(const bigfloat &other);
    bigfloat(bigfloat &&other) noexcept;
    bigfloat &operator=(const bigfloat &other);
    bigfloat &operator=(bigfloat &&other) noexcept;
    ~bigfloat();

    mpfr_prec_t bits() const noexcept
    {
        return mpfr_get_prec(m_value);
    }
    mpfr_srcptr get() const noexcept
    {
        return m_value;
    }
    mpfr_ptr get() noexcept
    {
        return m_value;
    }

    bool is_zero() const noexcept
    {
        return mpfr_zero_p(m_value) != 0;
    }
    bool is_finite() const noexcept
    {
        return mpfr_number_p(m_value) != 0;
    }
    int sign() const noexcept
    {
        return mpfr_sgn(m_value);
    }
    double to_double() const noexcept
    {
        return mpfr_get_d(m_value, MPFR_RNDN);
    }

    // `digits` significant decimal digits, %g style.
    std::string str(int digits) const;
    // Shortest scientific form that parses back to the identical value at
    // the same precision.
    std::string repr() const;

    bigfloat &operator+=(const bigfloat &rhs);
    bigfloat &operator-=(const bigfloat &rhs);
    bigfloat &operator*=(const bigfloat &rhs);
    bigfloat &operator/=(const bigfloat &rhs);
    bigfloat &operator*=(long rhs);
    bigfloat &operator/=(long rhs);
    bigfloat &operator+=(long rhs);
    bigfloat &operator-=(long rhs);

    bigfloat operator-() const;

    friend bigfloat operator+(bigfloat lhs, const bigfloat &rhs)
    {
        return lhs += rhs;
    }
    friend bigfloat operator-(bigfloat lhs, const bigfloat &rhs)
    {
        return lhs -= rhs;
    }
    friend bigfloat operator*(bigfloat lhs, const bigfloat &rhs)
    {
        return lhs *= rhs;
    }
    friend bigfloat operator/(bigfloat lhs, const bigfloat &rhs)
    {
        return lhs /= rhs;
    }
    friend bigfloat operator+(bigfloat lhs, long rhs)
    {
        return lhs += rhs;
    }
    friend bigfloat operator-(bigfloat lhs, long rhs)
    {
        return lhs -= rhs;
    }
    friend bigfloat operator*(bigfloat lhs, long rhs)
    {
        return lhs *= rhs;
    }
    friend bigfloat operator/(bigfloat lhs, long rhs)
    {
        return lhs /= rhs;
    }
    friend bigfloat operator+(long lhs, bigfloat rhs)
    {
        return rhs += lhs;
    }
    friend bigfloat operator*(long lhs, bigfloat rhs)
    {
        return rhs *= lhs;
    }
    friend bigfloat operator-(long lhs, const bigfloat &rhs);
    friend bigfloat operator/(long lhs, const bigfloat &rhs);

    friend bool operator==(const bigfloat &a, const bigfloat &b) noexcept
    {
        return mpfr_equal_p(a.m_value, b.m_value) != 0;
    }
    friend std::partial_ordering operator<=>(const bigfloat &a, const bigfloat &b) noexcept;
    friend std::partial_ordering operator<=>(const bigfloat &a, long b) noexcept;
    friend bool operator==(const bigfloat &a, long b) noexcept
    {
        return mpfr_cmp_si(a.m_value, b) == 0;
    }

private:
    mpfr_t m_value;
};

bigfloat exp(const bigfloat &x);
bigfloat expm1(const bigfloat &x);
bigfloat log(const bigfloat &x);
bigfloat sqrt(const bigfloat &x);
bigfloat abs(bigfloat x);
bigfloat pow(const bigfloat &x, unsigned long n);
bigfloat pow(const bigfloat &x, const bigfloat &y);
bigfloat max(const bigfloat &a, const bigfloat &b);

// 10^-digits at the given precision.
bigfloat ten_to_minus(int digits, mpfr_prec_t bits);

} // namespace protnum

#endif
