#include <protnum/bigfloat.hpp>

#include <algorithm>
#include <cmath>
#include <memory>
#include <string>

#include <protnum/errors.hpp>

namespace protnum
{

mpfr_prec_t bits_for_digits(int digits)
{
    if (digits < 1) {
        digits = 1;
    }
    // log2(10) = 3.3219...
    return static_cast<mpfr_prec_t>(std::ceil(digits * 3.3219280948873623)) + 8;
}

bigfloat::bigfloat() : bigfloat(bits_for_digits(default_digits)) {}

bigfloat::bigfloat(mpfr_prec_t bits)
{
    mpfr_init2(m_value, bits);
    mpfr_set_zero(m_value, 1);
}

bigfloat::bigfloat(long value, mpfr_prec_t bits)
{
    mpfr_init2(m_value, bits);
    mpfr_set_si(m_value, value, MPFR_RNDN);
}

bigfloat::bigfloat(const rational &value, mpfr_prec_t bits)
{
    mpfr_init2(m_value, bits);
    mpfr_set_q(m_value, value.get_mpq_t(), MPFR_RNDN);
}

bigfloat bigfloat::parse(std::string_view text, mpfr_prec_t bits)
{
    bigfloat out(bits);
    const std::string buf(text);
    char *end = nullptr;
    mpfr_strtofr(out.m_value, buf.c_str(), &end, 10, MPFR_RNDN);
    if (buf.empty() || end == buf.c_str() || *end != '\0') {
        throw error("cannot parse '" + buf + "' as a decimal number");
    }
    return out;
}

bigfloat::bigfloat(const bigfloat &other)
{
    mpfr_init2(m_value, other.bits());
    mpfr_set(m_value, other.m_value, MPFR_RNDN);
}

bigfloat::bigfloat(bigfloat &&other) noexcept
{
    mpfr_init2(m_value, MPFR_PREC_MIN);
    mpfr_swap(m_value, other.m_value);
}

bigfloat &bigfloat::operator=(const bigfloat &other)
{
    if (this != &other) {
        mpfr_set_prec(m_value, other.bits());
        mpfr_set(m_value, other.m_value, MPFR_RNDN);
    }
    return *this;
}

bigfloat &bigfloat::operator=(bigfloat &&other) noexcept
{
    mpfr_swap(m_value, other.m_value);
    return *this;
}

bigfloat::~bigfloat()
{
    mpfr_clear(m_value);
}

std::string bigfloat::str(int digits) const
{
    char *raw = nullptr;
    mpfr_asprintf(&raw, "%.*RNg", std::max(digits, 1), m_value);
    std::string out(raw);
    mpfr_free_str(raw);
    return out;
}

std::string bigfloat::repr() const
{
    // 1 + ceil(p log10 2) significant digits round-trip exactly.
    const int digits = 1 + static_cast<int>(std::ceil(static_cast<double>(bits()) * 0.30102999566398120));
    char *raw = nullptr;
    mpfr_asprintf(&raw, "%.*RNe", digits - 1, m_value);
    std::string out(raw);
    mpfr_free_str(raw);
    return out;
}

namespace
{

// Widens the destination so the result keeps the larger precision.
void widen(mpfr_ptr dst, mpfr_srcptr other)
{
    if (mpfr_get_prec(other) > mpfr_get_prec(dst)) {
        mpfr_prec_round(dst, mpfr_get_prec(other), MPFR_RNDN);
    }
}

} // namespace

bigfloat &bigfloat::operator+=(const bigfloat &rhs)
{
    widen(m_value, rhs.m_value);
    mpfr_add(m_value, m_value, rhs.m_value, MPFR_RNDN);
    return *this;
}

bigfloat &bigfloat::operator-=(const bigfloat &rhs)
{
    widen(m_value, rhs.m_value);
    mpfr_sub(m_value, m_value, rhs.m_value, MPFR_RNDN);
    return *this;
}

bigfloat &bigfloat::operator*=(const bigfloat &rhs)
{
    widen(m_value, rhs.m_value);
    mpfr_mul(m_value, m_value, rhs.m_value, MPFR_RNDN);
    return *this;
}

bigfloat &bigfloat::operator/=(const bigfloat &rhs)
{
    widen(m_value, rhs.m_value);
    mpfr_div(m_value, m_value, rhs.m_value, MPFR_RNDN);
    return *this;
}

bigfloat &bigfloat::operator*=(long rhs)
{
    mpfr_mul_si(m_value, m_value, rhs, MPFR_RNDN);
    return *this;
}

bigfloat &bigfloat::operator/=(long rhs)
{
    mpfr_div_si(m_value, m_value, rhs, MPFR_RNDN);
    return *this;
}

bigfloat &bigfloat::operator+=(long rhs)
{
    mpfr_add_si(m_value, m_value, rhs, MPFR_RNDN);
    return *this;
}

bigfloat &bigfloat::operator-=(long rhs)
{
    mpfr_sub_si(m_value, m_value, rhs, MPFR_RNDN);
    return *this;
}

bigfloat bigfloat::operator-() const
{
    bigfloat out(*this);
    mpfr_neg(out.m_value, out.m_value, MPFR_RNDN);
    return out;
}

bigfloat operator-(long lhs, const bigfloat &rhs)
{
    bigfloat out(rhs.bits());
    mpfr_si_sub(out.m_value, lhs, rhs.m_value, MPFR_RNDN);
    return out;
}

bigfloat operator/(long lhs, const bigfloat &rhs)
{
    bigfloat out(rhs.bits());
    mpfr_si_div(out.m_value, lhs, rhs.m_value, MPFR_RNDN);
    return out;
}

std::partial_ordering operator<=>(const bigfloat &a, const bigfloat &b) noexcept
{
    if (mpfr_unordered_p(a.m_value, b.m_value)) {
        return std::partial_ordering::unordered;
    }
    const int c = mpfr_cmp(a.m_value, b.m_value);
    return c < 0 ? std::partial_ordering::less : c > 0 ? std::partial_ordering::greater : std::partial_ordering::equivalent;
}

std::partial_ordering operator<=>(const bigfloat &a, long b) noexcept
{
    if (mpfr_nan_p(a.m_value)) {
        return std::partial_ordering::unordered;
    }
    const int c = mpfr_cmp_si(a.m_value, b);
    return c < 0 ? std::partial_ordering::less : c > 0 ? std::partial_ordering::greater : std::partial_ordering::equivalent;
}

bigfloat exp(const bigfloat &x)
{
    bigfloat out(x.bits());
    mpfr_exp(out.get(), x.get(), MPFR_RNDN);
    return out;
}

bigfloat expm1(const bigfloat &x)
{
    bigfloat out(x.bits());
    mpfr_expm1(out.get(), x.get(), MPFR_RNDN);
    return out;
}

bigfloat log(const bigfloat &x)
{
    bigfloat out(x.bits());
    mpfr_log(out.get(), x.get(), MPFR_RNDN);
    return out;
}

bigfloat sqrt(const bigfloat &x)
{
    bigfloat out(x.bits());
    mpfr_sqrt(out.get(), x.get(), MPFR_RNDN);
    return out;
}

bigfloat abs(bigfloat x)
{
    mpfr_abs(x.get(), x.get(), MPFR_RNDN);
    return x;
}

bigfloat pow(const bigfloat &x, unsigned long n)
{
    bigfloat out(x.bits());
    mpfr_pow_ui(out.get(), x.get(), n, MPFR_RNDN);
    return out;
}

bigfloat pow(const bigfloat &x, const bigfloat &y)
{
    bigfloat out(std::max(x.bits(), y.bits()));
    mpfr_pow(out.get(), x.get(), y.get(), MPFR_RNDN);
    return out;
}

bigfloat max(const bigfloat &a, const bigfloat &b)
{
    return (a < b) ? b : a;
}

bigfloat ten_to_minus(int digits, mpfr_prec_t bits)
{
    bigfloat out(10, bits);
    mpfr_pow_si(out.get(), out.get(), -static_cast<long>(digits), MPFR_RNDN);
    return out;
}

} // namespace protnum
