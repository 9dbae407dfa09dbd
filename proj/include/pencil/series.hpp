#ifndef PENCIL_SERIES_HPP
#define PENCIL_SERIES_HPP

#include <algorithm>
#include <cstddef>
#include <limits>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <pencil/coefficient.hpp>
#include <pencil/error.hpp>

namespace pencil
{

// Valuation of the zero series.
inline constexpr std::size_t infinite_valuation = std::numeric_limits<std::size_t>::max();

// A formal power series a_0 + a_1 x + ... + a_N x^N + O(x^{N+1}). The order N
// records how many coefficients are known; binary operations keep the
// smaller order and never invent coefficients beyond it.
template <coefficient R>
class truncated_series
{
public:
    using coefficient_type = R;

    truncated_series() : truncated_series(std::size_t(0)) {}

    explicit truncated_series(std::size_t order, std::string var = "x")
        : m_coeffs(order + 1, R(0)), m_var(std::move(var))
    {
    }

    explicit truncated_series(std::vector<R> coeffs, std::string var = "x")
        : m_coeffs(std::move(coeffs)), m_var(std::move(var))
    {
        if (m_coeffs.empty()) {
            throw order_underflow("a truncated series needs at least one coefficient");
        }
    }

    static truncated_series zero(std::size_t order)
    {
        return truncated_series(order);
    }

    static truncated_series constant(const R &c, std::size_t order)
    {
        truncated_series s(order);
        s.m_coeffs[0] = c;
        return s;
    }

    static truncated_series one(std::size_t order)
    {
        return constant(R(1), order);
    }

    // c * x^k; the zero series of the given order when k exceeds it.
    static truncated_series monomial(std::size_t k, std::size_t order, const R &c = R(1))
    {
        truncated_series s(order);
        if (k <= order) {
            s.m_coeffs[k] = c;
        }
        return s;
    }

    std::size_t order() const noexcept
    {
        return m_coeffs.size() - 1;
    }

    const std::vector<R> &coeffs() const noexcept
    {
        return m_coeffs;
    }

    const R &operator[](std::size_t i) const
    {
        return m_coeffs.at(i);
    }

    const std::string &var_name() const noexcept
    {
        return m_var;
    }

    truncated_series with_var(std::string var) const
    {
        truncated_series r = *this;
        r.m_var = std::move(var);
        return r;
    }

    std::size_t valuation() const
    {
        for (std::size_t i = 0; i < m_coeffs.size(); ++i) {
            if (!pencil::is_zero(m_coeffs[i])) {
                return i;
            }
        }
        return infinite_valuation;
    }

    bool is_zero() const
    {
        return valuation() == infinite_valuation;
    }

    // Restriction to a lower order.
    truncated_series truncated(std::size_t order) const
    {
        if (order > this->order()) {
            throw order_exceeded("cannot extend a series of order " + std::to_string(this->order()) + " to order "
                                 + std::to_string(order));
        }
        return truncated_series(std::vector<R>(m_coeffs.begin(), m_coeffs.begin() + order + 1), m_var);
    }

    friend bool operator==(const truncated_series &a, const truncated_series &b)
    {
        return a.m_coeffs == b.m_coeffs;
    }

private:
    std::vector<R> m_coeffs;
    std::string m_var;
};

using rational_series = truncated_series<rational>;
using float_series = truncated_series<big_float>;

// Exact polynomial (no truncation), stored with trailing zeros removed.
template <coefficient R>
class polynomial
{
public:
    polynomial() = default;

    explicit polynomial(std::vector<R> coeffs) : m_coeffs(std::move(coeffs))
    {
        trim();
    }

    static polynomial monomial(std::size_t k, const R &c = R(1))
    {
        std::vector<R> v(k + 1, R(0));
        v[k] = c;
        return polynomial(std::move(v));
    }

    bool is_zero() const noexcept
    {
        return m_coeffs.empty();
    }

    // Degree of the zero polynomial is reported as 0.
    std::size_t degree() const noexcept
    {
        return m_coeffs.empty() ? 0 : m_coeffs.size() - 1;
    }

    std::size_t valuation() const
    {
        for (std::size_t i = 0; i < m_coeffs.size(); ++i) {
            if (!pencil::is_zero(m_coeffs[i])) {
                return i;
            }
        }
        return infinite_valuation;
    }

    R operator[](std::size_t i) const
    {
        return i < m_coeffs.size() ? m_coeffs[i] : R(0);
    }

    const std::vector<R> &coeffs() const noexcept
    {
        return m_coeffs;
    }

    truncated_series<R> to_series(std::size_t order, std::string var = "x") const
    {
        truncated_series<R> s(order, std::move(var));
        std::vector<R> c(order + 1, R(0));
        for (std::size_t i = 0; i < m_coeffs.size() && i <= order; ++i) {
            c[i] = m_coeffs[i];
        }
        return truncated_series<R>(std::move(c), s.var_name());
    }

    friend bool operator==(const polynomial &a, const polynomial &b)
    {
        return a.m_coeffs == b.m_coeffs;
    }

private:
    void trim()
    {
        while (!m_coeffs.empty() && pencil::is_zero(m_coeffs.back())) {
            m_coeffs.pop_back();
        }
    }

    std::vector<R> m_coeffs;
};

using rational_polynomial = polynomial<rational>;

namespace detail
{

template <coefficient R>
truncated_series<R> make_series(std::vector<R> c, const truncated_series<R> &like)
{
    return truncated_series<R>(std::move(c), like.var_name());
}

} // namespace detail

template <coefficient R>
truncated_series<R> operator+(const truncated_series<R> &a, const truncated_series<R> &b)
{
    const auto n = std::min(a.order(), b.order());
    std::vector<R> c(n + 1);
    for (std::size_t i = 0; i <= n; ++i) {
        c[i] = a[i] + b[i];
    }
    return detail::make_series(std::move(c), a);
}

template <coefficient R>
truncated_series<R> operator-(const truncated_series<R> &a, const truncated_series<R> &b)
{
    const auto n = std::min(a.order(), b.order());
    std::vector<R> c(n + 1);
    for (std::size_t i = 0; i <= n; ++i) {
        c[i] = a[i] - b[i];
    }
    return detail::make_series(std::move(c), a);
}

template <coefficient R>
truncated_series<R> operator-(const truncated_series<R> &a)
{
    std::vector<R> c(a.coeffs().size());
    for (std::size_t i = 0; i < c.size(); ++i) {
        c[i] = -a[i];
    }
    return detail::make_series(std::move(c), a);
}

template <coefficient R>
truncated_series<R> operator*(const truncated_series<R> &a, const truncated_series<R> &b)
{
    const auto n = std::min(a.order(), b.order());
    const auto va = a.valuation(), vb = b.valuation();
    std::vector<R> c(n + 1, R(0));
    if (va == infinite_valuation || vb == infinite_valuation) {
        return detail::make_series(std::move(c), a);
    }
    for (std::size_t i = va; i <= n; ++i) {
        if (pencil::is_zero(a[i])) {
            continue;
        }
        for (std::size_t j = vb; i + j <= n; ++j) {
            c[i + j] += a[i] * b[j];
        }
    }
    return detail::make_series(std::move(c), a);
}

template <coefficient R>
truncated_series<R> operator*(const R &k, const truncated_series<R> &a)
{
    std::vector<R> c(a.coeffs().size());
    for (std::size_t i = 0; i < c.size(); ++i) {
        c[i] = k * a[i];
    }
    return detail::make_series(std::move(c), a);
}

template <coefficient R>
truncated_series<R> operator*(const truncated_series<R> &a, const R &k)
{
    return k * a;
}

template <coefficient R>
truncated_series<R> scale(const truncated_series<R> &a, const R &k)
{
    return k * a;
}

// x^k * s. The known order grows by k since the low coefficients are exact zeros.
template <coefficient R>
truncated_series<R> shift_up(const truncated_series<R> &s, std::size_t k)
{
    std::vector<R> c(s.order() + k + 1, R(0));
    std::copy(s.coeffs().begin(), s.coeffs().end(), c.begin() + static_cast<std::ptrdiff_t>(k));
    return detail::make_series(std::move(c), s);
}

// s / x^k for a series with valuation >= k; the known order drops by k.
template <coefficient R>
truncated_series<R> shift_down(const truncated_series<R> &s, std::size_t k)
{
    if (k > s.order()) {
        throw order_exceeded("cannot divide a series of order " + std::to_string(s.order()) + " by x^"
                             + std::to_string(k));
    }
    const auto v = s.valuation();
    if (v < k) {
        throw non_unit_divisor("series of valuation " + std::to_string(v) + " is not divisible by x^"
                               + std::to_string(k));
    }
    return detail::make_series(std::vector<R>(s.coeffs().begin() + static_cast<std::ptrdiff_t>(k), s.coeffs().end()),
                               s);
}

template <coefficient R>
truncated_series<R> derive(const truncated_series<R> &s)
{
    if (s.order() == 0) {
        throw order_underflow("cannot differentiate a series of order 0");
    }
    std::vector<R> c(s.order());
    for (std::size_t i = 0; i < c.size(); ++i) {
        c[i] = s[i + 1] * from_int<R>(static_cast<long>(i + 1));
    }
    return detail::make_series(std::move(c), s);
}

template <coefficient R>
truncated_series<R> inverse(const truncated_series<R> &u)
{
    if (pencil::is_zero(u[0])) {
        throw non_unit_divisor("divisor has zero constant term (valuation " + std::to_string(u.valuation()) + ")");
    }
    const auto n = u.order();
    std::vector<R> b(n + 1, R(0));
    b[0] = R(1) / u[0];
    for (std::size_t k = 1; k <= n; ++k) {
        R acc(0);
        for (std::size_t j = 1; j <= k; ++j) {
            if (!pencil::is_zero(u[j])) {
                acc += u[j] * b[k - j];
            }
        }
        b[k] = -acc * b[0];
    }
    return detail::make_series(std::move(b), u);
}

template <coefficient R>
truncated_series<R> divide(const truncated_series<R> &a, const truncated_series<R> &u)
{
    if (pencil::is_zero(u[0])) {
        throw non_unit_divisor("divisor has zero constant term (valuation " + std::to_string(u.valuation()) + ")");
    }
    const auto n = std::min(a.order(), u.order());
    std::vector<R> b(n + 1, R(0));
    const R inv0 = R(1) / u[0];
    for (std::size_t k = 0; k <= n; ++k) {
        R acc = a[k];
        for (std::size_t j = 1; j <= k; ++j) {
            if (!pencil::is_zero(u[j])) {
                acc -= u[j] * b[k - j];
            }
        }
        b[k] = acc * inv0;
    }
    return detail::make_series(std::move(b), a);
}

// s(p(x)) by Horner's rule over truncated arithmetic. Requires p(0) = 0.
template <coefficient R>
truncated_series<R> compose(const truncated_series<R> &s, const truncated_series<R> &p)
{
    if (!pencil::is_zero(p[0])) {
        throw composition_at_unit("inner series has a nonzero constant term");
    }
    const auto n = std::min(s.order(), p.order());
    const auto inner = p.truncated(n);
    auto acc = truncated_series<R>::constant(s[n], n);
    for (std::size_t k = n; k-- > 0;) {
        acc = acc * inner;
        std::vector<R> c = acc.coeffs();
        c[0] += s[k];
        acc = truncated_series<R>(std::move(c));
    }
    return acc.with_var(s.var_name());
}

template <coefficient R>
truncated_series<R> compose(const truncated_series<R> &s, const polynomial<R> &p)
{
    if (!pencil::is_zero(p[0])) {
        throw composition_at_unit("inner polynomial has a nonzero constant term");
    }
    return compose(s, p.to_series(s.order(), s.var_name()));
}

// exp(s) = sum s^k / k!, via n e_n = sum_{k=1}^n k s_k e_{n-k}. A nonzero
// constant term is only accepted in big-float mode, where exp(a_0) is
// factored out.
template <coefficient R>
truncated_series<R> exp_series(const truncated_series<R> &s)
{
    R factor(1);
    std::vector<R> a = s.coeffs();
    if (!pencil::is_zero(a[0])) {
        if constexpr (is_exact_v<R>) {
            throw nonzero_constant_term("exp of a series with nonzero constant term is not exact");
        } else {
            factor = boost::multiprecision::exp(a[0]);
            a[0] = R(0);
        }
    }
    const auto n = s.order();
    std::vector<R> e(n + 1, R(0));
    e[0] = R(1);
    for (std::size_t m = 1; m <= n; ++m) {
        R acc(0);
        for (std::size_t k = 1; k <= m; ++k) {
            if (!pencil::is_zero(a[k])) {
                acc += from_int<R>(static_cast<long>(k)) * a[k] * e[m - k];
            }
        }
        e[m] = acc / from_int<R>(static_cast<long>(m));
    }
    if (!pencil::is_zero(factor - R(1))) {
        for (auto &c : e) {
            c *= factor;
        }
    }
    return detail::make_series(std::move(e), s);
}

// J_k: truncation up to and including degree k.
template <coefficient R>
truncated_series<R> truncate_J(const truncated_series<R> &s, std::size_t k)
{
    if (k > s.order()) {
        throw order_exceeded("J_" + std::to_string(k) + " needs order >= " + std::to_string(k) + ", series has order "
                             + std::to_string(s.order()));
    }
    std::vector<R> c = s.coeffs();
    std::fill(c.begin() + static_cast<std::ptrdiff_t>(k) + 1, c.end(), R(0));
    return detail::make_series(std::move(c), s);
}

// T_k h = (h - J_k h) / x^k. Result order N - k, constant term 0.
template <coefficient R>
truncated_series<R> tail_T(const truncated_series<R> &s, std::size_t k)
{
    if (k > s.order()) {
        throw order_exceeded("T_" + std::to_string(k) + " needs order >= " + std::to_string(k) + ", series has order "
                             + std::to_string(s.order()));
    }
    std::vector<R> c(s.order() - k + 1, R(0));
    for (std::size_t j = 1; j < c.size(); ++j) {
        c[j] = s[j + k];
    }
    return detail::make_series(std::move(c), s);
}

// E(x) = sum_{n>=0} n! x^{n+1}, the formal solution of x^2 y' = y - x.
template <coefficient R>
truncated_series<R> euler_series(std::size_t order)
{
    std::vector<R> c(order + 1, R(0));
    integer fact = 1;
    for (std::size_t n = 0; n + 1 <= order; ++n) {
        if (n > 0) {
            fact *= static_cast<unsigned long>(n);
        }
        c[n + 1] = coefficient_traits<R>::from_rational(rational(fact));
    }
    return truncated_series<R>(std::move(c));
}

struct q_short_result {
    bool is_short;
    bool is_positive;
    std::size_t val;
    std::size_t deg;
};

// q-short: P(0) = 0 and deg P < (q+1) val P. Positive: the lowest-order
// coefficient (equivalently P^{(val P)}(0)) is > 0.
template <coefficient R>
q_short_result q_short_check(const polynomial<R> &p, std::size_t q)
{
    if (p.is_zero()) {
        throw undefined_valuation("the zero polynomial has no valuation");
    }
    if (q < 1) {
        throw error("q must be at least 1", error_class::usage);
    }
    const auto v = p.valuation();
    const auto d = p.degree();
    const bool is_short = v >= 1 && d < (q + 1) * v;
    const bool positive = coefficient_traits<R>::sign(p[v]) > 0;
    return {is_short, positive, v, d};
}

// Horner evaluation of the known jet at a big-float point.
template <coefficient R>
big_float evaluate(const truncated_series<R> &s, const big_float &t)
{
    big_float acc = coefficient_traits<R>::to_big_float(s[s.order()]);
    for (std::size_t k = s.order(); k-- > 0;) {
        acc = acc * t + coefficient_traits<R>::to_big_float(s[k]);
    }
    return acc;
}

template <coefficient R>
std::string to_string(const truncated_series<R> &s)
{
    std::ostringstream os;
    bool first = true;
    for (std::size_t i = 0; i < s.coeffs().size(); ++i) {
        const R &c = s[i];
        if (pencil::is_zero(c)) {
            continue;
        }
        const int sg = coefficient_traits<R>::sign(c);
        const R mag = sg < 0 ? R(-c) : c;
        os << (first ? (sg < 0 ? "-" : "") : (sg < 0 ? " - " : " + "));
        const bool unit = pencil::is_zero(mag - R(1));
        if (i == 0 || !unit) {
            os << coefficient_traits<R>::to_string(mag);
            if (i > 0) {
                os << "*";
            }
        }
        if (i > 0) {
            os << s.var_name();
            if (i > 1) {
                os << "^" << i;
            }
        }
        first = false;
    }
    if (first) {
        os << "0";
    }
    return os.str();
}

} // namespace pencil

#endif
