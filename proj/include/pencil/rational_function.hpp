#ifndef PENCIL_RATIONAL_FUNCTION_HPP
#define PENCIL_RATIONAL_FUNCTION_HPP

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdlib>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include <pencil/coefficient.hpp>
#include <pencil/error.hpp>
#include <pencil/expr.hpp>

namespace pencil
{

// Sparse multivariate polynomial over Q in the expression variables.
class mpoly
{
public:
    using exponents = std::array<unsigned, var_count>;

    mpoly() = default;

    static mpoly constant(const rational &c)
    {
        mpoly p;
        if (c != 0) {
            p.m_terms.emplace(exponents{}, c);
        }
        return p;
    }

    static mpoly variable(var v)
    {
        exponents e{};
        e[static_cast<std::size_t>(v)] = 1;
        mpoly p;
        p.m_terms.emplace(e, rational(1));
        return p;
    }

    bool is_zero() const noexcept
    {
        return m_terms.empty();
    }

    bool is_constant() const
    {
        return m_terms.empty() || (m_terms.size() == 1 && m_terms.begin()->first == exponents{});
    }

    rational constant_value() const
    {
        auto it = m_terms.find(exponents{});
        return it == m_terms.end() ? rational(0) : it->second;
    }

    const std::map<exponents, rational> &terms() const noexcept
    {
        return m_terms;
    }

    friend mpoly operator+(const mpoly &a, const mpoly &b)
    {
        mpoly r = a;
        for (const auto &[e, c] : b.m_terms) {
            r.add_term(e, c);
        }
        return r;
    }

    friend mpoly operator-(const mpoly &a)
    {
        mpoly r = a;
        for (auto &[e, c] : r.m_terms) {
            c = -c;
        }
        return r;
    }

    friend mpoly operator-(const mpoly &a, const mpoly &b)
    {
        return a + (-b);
    }

    friend mpoly operator*(const mpoly &a, const mpoly &b)
    {
        mpoly r;
        for (const auto &[ea, ca] : a.m_terms) {
            for (const auto &[eb, cb] : b.m_terms) {
                exponents e;
                for (std::size_t i = 0; i < var_count; ++i) {
                    e[i] = ea[i] + eb[i];
                }
                r.add_term(e, ca * cb);
            }
        }
        return r;
    }

    friend bool operator==(const mpoly &a, const mpoly &b)
    {
        return a.m_terms == b.m_terms;
    }

    // Largest monomial dividing every term.
    exponents monomial_content() const
    {
        exponents g{};
        bool first = true;
        for (const auto &[e, c] : m_terms) {
            if (first) {
                g = e;
                first = false;
            } else {
                for (std::size_t i = 0; i < var_count; ++i) {
                    g[i] = std::min(g[i], e[i]);
                }
            }
        }
        return g;
    }

    mpoly divide_monomial(const exponents &m) const
    {
        mpoly r;
        for (const auto &[e0, c] : m_terms) {
            exponents e = e0;
            for (std::size_t i = 0; i < var_count; ++i) {
                e[i] -= m[i];
            }
            r.m_terms.emplace(e, c);
        }
        return r;
    }

    mpoly scaled(const rational &k) const
    {
        mpoly r;
        if (k == 0) {
            return r;
        }
        for (const auto &[e, c] : m_terms) {
            r.m_terms.emplace(e, c * k);
        }
        return r;
    }

    expr to_expr() const;

private:
    void add_term(const exponents &e, const rational &c)
    {
        if (c == 0) {
            return;
        }
        auto [it, inserted] = m_terms.emplace(e, c);
        if (!inserted) {
            it->second += c;
            if (it->second == 0) {
                m_terms.erase(it);
            }
        }
    }

    std::map<exponents, rational> m_terms;
};

inline expr mpoly::to_expr() const
{
    if (m_terms.empty()) {
        return expr::constant(rational(0));
    }
    std::optional<expr> sum;
    // Highest total degree first reads most naturally.
    std::vector<std::pair<exponents, rational>> ordered(m_terms.begin(), m_terms.end());
    std::stable_sort(ordered.begin(), ordered.end(), [](const auto &a, const auto &b) {
        unsigned da = 0, db = 0;
        for (std::size_t i = 0; i < var_count; ++i) {
            da += a.first[i];
            db += b.first[i];
        }
        return da > db;
    });
    for (const auto &[e, c] : ordered) {
        std::optional<expr> mono;
        for (std::size_t i = 0; i < var_count; ++i) {
            if (e[i] == 0) {
                continue;
            }
            expr f = expr::variable(static_cast<var>(i));
            if (e[i] > 1) {
                f = expr::power(f, static_cast<int>(e[i]));
            }
            mono = mono ? *mono * f : f;
        }
        const rational mag = c < 0 ? rational(-c) : c;
        expr term = !mono ? expr::constant(mag) : (mag == 1 ? *mono : expr::constant(mag) * *mono);
        if (!sum) {
            sum = c < 0 ? -term : term;
        } else {
            sum = c < 0 ? *sum - term : *sum + term;
        }
    }
    return *sum;
}

// Quotient of polynomials with monomial content cancelled.
struct rational_function {
    mpoly num = mpoly::constant(rational(0));
    mpoly den = mpoly::constant(rational(1));

    rational_function normalized() const
    {
        if (den.is_zero()) {
            throw evaluation_singularity("division by zero", "0");
        }
        if (num.is_zero()) {
            return {num, mpoly::constant(rational(1))};
        }
        auto gn = num.monomial_content();
        const auto gd = den.monomial_content();
        for (std::size_t i = 0; i < var_count; ++i) {
            gn[i] = std::min(gn[i], gd[i]);
        }
        mpoly n = num.divide_monomial(gn), d = den.divide_monomial(gn);
        const rational lead = d.terms().rbegin()->second;
        if (d.is_constant()) {
            return {n.scaled(rational(1) / lead), mpoly::constant(rational(1))};
        }
        return {n.scaled(rational(1) / lead), d.scaled(rational(1) / lead)};
    }

    expr to_expr() const
    {
        const auto r = normalized();
        if (r.den.is_constant()) {
            return r.num.to_expr();
        }
        return r.num.to_expr() / r.den.to_expr();
    }
};

inline rational_function operator+(const rational_function &a, const rational_function &b)
{
    if (a.den == b.den) {
        return rational_function{a.num + b.num, a.den}.normalized();
    }
    return rational_function{a.num * b.den + b.num * a.den, a.den * b.den}.normalized();
}

inline rational_function operator-(const rational_function &a)
{
    return {-a.num, a.den};
}

inline rational_function operator-(const rational_function &a, const rational_function &b)
{
    return a + (-b);
}

inline rational_function operator*(const rational_function &a, const rational_function &b)
{
    return rational_function{a.num * b.num, a.den * b.den}.normalized();
}

inline rational_function operator/(const rational_function &a, const rational_function &b)
{
    if (b.num.is_zero()) {
        throw evaluation_singularity("division by zero", "0");
    }
    return rational_function{a.num * b.den, a.den * b.num}.normalized();
}

// Expands a rational expression; E(...) and exp(...) are rejected.
inline rational_function to_rational_function(const expr &e)
{
    using k = expr::kind;
    switch (e.node_kind()) {
        case k::constant:
            return {mpoly::constant(e.value()), mpoly::constant(rational(1))};
        case k::variable:
            return {mpoly::variable(e.variable_id()), mpoly::constant(rational(1))};
        case k::add:
            return to_rational_function(e.lhs()) + to_rational_function(e.rhs());
        case k::sub:
            return to_rational_function(e.lhs()) - to_rational_function(e.rhs());
        case k::mul:
            return to_rational_function(e.lhs()) * to_rational_function(e.rhs());
        case k::div:
            return to_rational_function(e.lhs()) / to_rational_function(e.rhs());
        case k::neg:
            return -to_rational_function(e.operand());
        case k::pow: {
            const auto b = to_rational_function(e.lhs());
            rational_function r;
            r.num = mpoly::constant(rational(1));
            for (int i = 0; i < std::abs(e.exponent()); ++i) {
                r = r * b;
            }
            if (e.exponent() < 0) {
                r = rational_function{mpoly::constant(rational(1)), mpoly::constant(rational(1))} / r;
            }
            return r;
        }
        case k::euler:
        case k::exp:
            break;
    }
    throw error("not a rational expression: " + to_string(e), error_class::usage);
}

} // namespace pencil

#endif
