#ifndef PROTNUM_REPORT_IO_HPP
#define PROTNUM_REPORT_IO_HPP

#include <string>
#include <string_view>

#include <protnum/protection.hpp>
#include <protnum/series.hpp>

namespace protnum
{

// Full-precision decimal strings; parsing back gives identical values.
std::string to_json(const protection_report &report);
protection_report report_from_json(std::string_view text);

// Rows "family,mode,k,value". Probability rows carry k = 1..k_max; the
// summary rows use k = mean, variance, tail_bound, variance_tail_bound,
// k_max, precision.
std::string to_csv(const protection_report &report);
protection_report report_from_csv(std::string_view text);

// JSON array of coefficient strings ("p/q" for rationals).
template <series_scalar S>
std::string series_to_json(const truncated_series<S> &f);

rational_series rational_series_from_json(std::string_view text);

bool same_report(const protection_report &a, const protection_report &b);

} // namespace protnum

#endif
