#ifndef PROTNUM_TOOLS_CLI_HPP
#define PROTNUM_TOOLS_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include <protnum/bigfloat.hpp>

namespace protnum::cli
{

// Exit codes.
inline constexpr int ok = 0;
inline constexpr int check_failed = 1;
inline constexpr int usage_error = 2;
inline constexpr int precision_failure = 3;

// args excludes the program name.
int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

// x with as many decimals as `printed` has. Picks the floor or the ceiling
// when one of them reproduces `printed`, else rounds to nearest.
std::string display_like(const bigfloat &x, const std::string &printed);

} // namespace protnum::cli

#endif
