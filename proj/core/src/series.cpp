#include <protnum/series.hpp>

namespace protnum
{

template class truncated_series<rational>;
template class truncated_series<bigfloat>;

float_series to_float_series(const rational_series &f, mpfr_prec_t bits)
{
    std::vector<bigfloat> out;
    out.reserve(f.order() + 1);
    for (const auto &c : f.coefficients()) {
        out.emplace_back(c, bits);
    }
    return float_series(std::move(out));
}

} // namespace protnum
