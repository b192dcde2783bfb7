#ifndef PROTNUM_ERRORS_HPP
#define PROTNUM_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace protnum
{

// Root of all library errors. Callers that only care about "something went
// wrong in protnum" catch this; the CLI maps subclasses to exit codes.
class error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

// Division by a series whose constant term is zero.
class unit_divisor_error : public error
{
public:
    using error::error;
};

// Argument outside the mathematical domain of an operation (exp of a
// series with nonzero constant term, k < 1, ...).
class domain_error : public error
{
public:
    using error::error;
};

// A tail guarantee was requested at a point on or outside the disc of
// convergence.
class convergence_domain_error : public error
{
public:
    using error::error;
};

// A fixed-point iteration failed to grow its verified prefix.
class divergence_error : public error
{
public:
    using error::error;
};

// A family description violates the standing assumptions on phi.
class validation_error : public error
{
public:
    using error::error;
};

class singularity_search_error : public error
{
public:
    using error::error;
};

// The requested number of digits cannot be certified at the configured
// truncation order (or k cap).
class precision_error : public error
{
public:
    using error::error;
};

// Brute-force or sampling request above its configured cap.
class resource_error : public error
{
public:
    using error::error;
};

class unsupported_oracle_error : public error
{
public:
    using error::error;
};

class undefined_probability_error : public error
{
public:
    using error::error;
};

class impossible_size_error : public error
{
public:
    using error::error;
};

// Numerically impossible outcome such as a clearly negative variance.
class internal_consistency_error : public error
{
public:
    using error::error;
};

} // namespace protnum

#endif
