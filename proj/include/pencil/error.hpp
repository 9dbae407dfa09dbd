#ifndef PENCIL_ERROR_HPP
#define PENCIL_ERROR_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace pencil
{

// Coarse classification used by the command-line front end to pick an exit
// code: usage problems exit with 2, everything else with 3.
enum class error_class { usage, numeric };

class error : public std::runtime_error
{
public:
    explicit error(const std::string &what, error_class cls = error_class::numeric)
        : std::runtime_error(what), m_class(cls)
    {
    }

    error_class classification() const noexcept
    {
        return m_class;
    }

private:
    error_class m_class;
};

#define PENCIL_DEFINE_ERROR(name, cls)                                                                                 \
    class name : public error                                                                                          \
    {                                                                                                                  \
    public:                                                                                                            \
        explicit name(const std::string &what) : error(what, cls) {}                                                   \
    };

// Series algebra.
PENCIL_DEFINE_ERROR(mode_mismatch, error_class::usage)
PENCIL_DEFINE_ERROR(order_underflow, error_class::numeric)
PENCIL_DEFINE_ERROR(order_exceeded, error_class::numeric)
PENCIL_DEFINE_ERROR(composition_at_unit, error_class::numeric)
PENCIL_DEFINE_ERROR(non_unit_divisor, error_class::numeric)
PENCIL_DEFINE_ERROR(nonzero_constant_term, error_class::numeric)
PENCIL_DEFINE_ERROR(undefined_valuation, error_class::numeric)

// Curves and fields.
PENCIL_DEFINE_ERROR(degenerate_curve, error_class::numeric)
PENCIL_DEFINE_ERROR(non_unit_denominator, error_class::numeric)
PENCIL_DEFINE_ERROR(non_adapted_chart, error_class::numeric)
PENCIL_DEFINE_ERROR(constant_curve, error_class::numeric)
PENCIL_DEFINE_ERROR(unknown_identifier, error_class::usage)
PENCIL_DEFINE_ERROR(domain_error, error_class::numeric)

// Exact linear algebra.
PENCIL_DEFINE_ERROR(exactness_required, error_class::usage)

// Configuration.
PENCIL_DEFINE_ERROR(config_error, error_class::usage)

#undef PENCIL_DEFINE_ERROR

class syntax_error : public error
{
public:
    syntax_error(const std::string &what, std::size_t offset)
        : error(what + " at offset " + std::to_string(offset), error_class::usage), m_offset(offset)
    {
    }

    std::size_t offset() const noexcept
    {
        return m_offset;
    }

private:
    std::size_t m_offset;
};

// Raised when an expression cannot be evaluated at a point; carries the
// offending sub-expression in printed form.
class evaluation_singularity : public error
{
public:
    evaluation_singularity(const std::string &what, std::string subexpr)
        : error(what + ": " + subexpr), m_subexpr(std::move(subexpr))
    {
    }

    const std::string &subexpression() const noexcept
    {
        return m_subexpr;
    }

private:
    std::string m_subexpr;
};

// Integration failures carry the last abscissa that was reached.
class integration_error : public error
{
public:
    integration_error(const std::string &what, double last_x)
        : error(what + " (last x = " + std::to_string(last_x) + ")"), m_last_x(last_x)
    {
    }

    double last_x() const noexcept
    {
        return m_last_x;
    }

private:
    double m_last_x;
};

class stiffness_error : public integration_error
{
    using integration_error::integration_error;
};

class chart_violation : public integration_error
{
    using integration_error::integration_error;
};

class blowup_error : public integration_error
{
    using integration_error::integration_error;
};

class zero_crossing : public error
{
public:
    zero_crossing(const std::string &what, double x) : error(what), m_x(x) {}

    double x() const noexcept
    {
        return m_x;
    }

private:
    double m_x;
};

} // namespace pencil

#endif
