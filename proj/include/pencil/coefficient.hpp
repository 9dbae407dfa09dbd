#ifndef PENCIL_COEFFICIENT_HPP
#define PENCIL_COEFFICIENT_HPP

#include <cmath>
#include <concepts>
#include <cstddef>
#include <mutex>
#include <string>
#include <string_view>

#include <boost/multiprecision/gmp.hpp>
#include <boost/multiprecision/mpfr.hpp>

#include <pencil/error.hpp>

namespace pencil
{

using integer = boost::multiprecision::mpz_int;
using rational = boost::multiprecision::mpq_rational;
using big_float = boost::multiprecision::mpfr_float;

enum class coefficient_mode { exact_rational, big_float };

inline const char *mode_name(coefficient_mode m)
{
    return m == coefficient_mode::exact_rational ? "exact-rational" : "big-float";
}

inline constexpr unsigned default_float_bits = 128;
inline constexpr unsigned min_float_bits = 64;

namespace detail
{

inline std::recursive_mutex &precision_mutex()
{
    static std::recursive_mutex m;
    return m;
}

inline unsigned bits_to_digits10(unsigned bits)
{
    return static_cast<unsigned>(std::ceil(bits * 0.30102999566398120));
}

} // namespace detail

// Sets the working precision of big_float values created in the current
// scope. MPFR's default precision is process-wide, so the scope also holds a
// lock: concurrent big-float work is serialised, exact work is unaffected.
class precision_scope
{
public:
    explicit precision_scope(unsigned bits) : m_lock(detail::precision_mutex()), m_saved(big_float::default_precision())
    {
        if (bits < min_float_bits) {
            throw error("big-float precision must be at least " + std::to_string(min_float_bits) + " bits, got "
                            + std::to_string(bits),
                        error_class::usage);
        }
        big_float::default_precision(detail::bits_to_digits10(bits));
        m_bits = bits;
    }
    ~precision_scope()
    {
        big_float::default_precision(m_saved);
    }
    precision_scope(const precision_scope &) = delete;
    precision_scope &operator=(const precision_scope &) = delete;

    unsigned bits() const noexcept
    {
        return m_bits;
    }

private:
    std::unique_lock<std::recursive_mutex> m_lock;
    unsigned m_saved;
    unsigned m_bits = 0;
};

// Parses "n", "n/d", or a decimal literal ("-1.25", "3e-4") into an exact
// rational.
// Decimal integer with optional sign; leading zeros are not octal here.
inline integer parse_integer_text(std::string_view text)
{
    std::string t(text);
    const std::size_t sign = !t.empty() && (t[0] == '-' || t[0] == '+') ? 1 : 0;
    if (t.size() == sign || t.find_first_not_of("0123456789", sign) != std::string::npos) {
        throw error("malformed integer '" + t + "'", error_class::usage);
    }
    const auto first = std::min(t.find_first_not_of('0', sign), t.size() - 1);
    t.erase(sign, first - sign);
    return integer(t);
}

inline rational parse_rational(std::string_view text)
{
    auto fail = [&] { return error("malformed number '" + std::string(text) + "'", error_class::usage); };
    if (text.empty()) {
        throw fail();
    }
    if (auto slash = text.find('/'); slash != std::string_view::npos) {
        try {
            integer num = parse_integer_text(text.substr(0, slash));
            integer den = parse_integer_text(text.substr(slash + 1));
            if (den == 0) {
                throw fail();
            }
            return rational(num, den);
        } catch (const error &) {
            throw fail();
        }
    }
    std::size_t i = 0;
    bool negative = false;
    if (text[i] == '+' || text[i] == '-') {
        negative = text[i] == '-';
        ++i;
    }
    std::string digits;
    long scale = 0;
    bool seen_point = false, seen_digit = false;
    for (; i < text.size(); ++i) {
        char c = text[i];
        if (c >= '0' && c <= '9') {
            digits.push_back(c);
            seen_digit = true;
            if (seen_point) {
                --scale;
            }
        } else if (c == '.' && !seen_point) {
            seen_point = true;
        } else {
            break;
        }
    }
    if (!seen_digit) {
        throw fail();
    }
    if (i < text.size()) {
        if (text[i] != 'e' && text[i] != 'E') {
            throw fail();
        }
        ++i;
        std::string exp_text(text.substr(i));
        if (exp_text.empty()) {
            throw fail();
        }
        std::size_t used = 0;
        long e = 0;
        try {
            e = std::stol(exp_text, &used);
        } catch (const std::exception &) {
            throw fail();
        }
        if (used != exp_text.size()) {
            throw fail();
        }
        scale += e;
    }
    // A leading zero would make GMP read the digits as octal.
    digits.erase(0, std::min(digits.find_first_not_of('0'), digits.size() - 1));
    rational r{integer(digits)};
    integer ten_pow = boost::multiprecision::pow(integer(10), static_cast<unsigned>(scale < 0 ? -scale : scale));
    if (scale < 0) {
        r /= rational(ten_pow);
    } else {
        r *= rational(ten_pow);
    }
    return negative ? rational(-r) : r;
}

inline std::string to_string(const rational &q)
{
    if (boost::multiprecision::denominator(q) == 1) {
        return boost::multiprecision::numerator(q).str();
    }
    return boost::multiprecision::numerator(q).str() + "/" + boost::multiprecision::denominator(q).str();
}

template <typename R>
struct coefficient_traits;

template <>
struct coefficient_traits<rational> {
    static constexpr coefficient_mode mode = coefficient_mode::exact_rational;
    static constexpr bool exact = true;

    static rational from_rational(const rational &q)
    {
        return q;
    }
    static bool is_zero(const rational &a)
    {
        return a == 0;
    }
    static int sign(const rational &a)
    {
        return a.sign();
    }
    static double to_double(const rational &a)
    {
        return a.convert_to<double>();
    }
    static big_float to_big_float(const rational &a)
    {
        return big_float(a);
    }
    static std::string to_string(const rational &a)
    {
        return pencil::to_string(a);
    }
    static rational parse(std::string_view s)
    {
        return parse_rational(s);
    }
    static double magnitude(const rational &a)
    {
        return std::fabs(to_double(a));
    }
};

template <>
struct coefficient_traits<big_float> {
    static constexpr coefficient_mode mode = coefficient_mode::big_float;
    static constexpr bool exact = false;

    static big_float from_rational(const rational &q)
    {
        return big_float(q);
    }
    static bool is_zero(const big_float &a)
    {
        return a == 0;
    }
    static int sign(const big_float &a)
    {
        return a.sign();
    }
    static double to_double(const big_float &a)
    {
        return a.convert_to<double>();
    }
    static big_float to_big_float(const big_float &a)
    {
        return a;
    }
    static std::string to_string(const big_float &a)
    {
        return a.str(0, std::ios_base::scientific);
    }
    static big_float parse(std::string_view s)
    {
        try {
            return big_float(std::string(s));
        } catch (const std::runtime_error &) {
            throw error("malformed number '" + std::string(s) + "'", error_class::usage);
        }
    }
    static double magnitude(const big_float &a)
    {
        return std::fabs(to_double(a));
    }
};

template <typename R>
concept coefficient = requires(const R &a, const R &b) {
    { coefficient_traits<R>::mode } -> std::convertible_to<coefficient_mode>;
    { a + b } -> std::convertible_to<R>;
    { a - b } -> std::convertible_to<R>;
    { a * b } -> std::convertible_to<R>;
    { a / b } -> std::convertible_to<R>;
    { -a } -> std::convertible_to<R>;
};

template <coefficient R>
inline constexpr bool is_exact_v = coefficient_traits<R>::exact;

template <coefficient R>
R from_int(long v)
{
    return coefficient_traits<R>::from_rational(rational(v));
}

template <coefficient R>
bool is_zero(const R &a)
{
    return coefficient_traits<R>::is_zero(a);
}

} // namespace pencil

#endif
