#ifndef PENCIL_EXPR_HPP
#define PENCIL_EXPR_HPP

#include <array>
#include <cctype>
#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <pencil/coefficient.hpp>
#include <pencil/error.hpp>

namespace pencil
{

enum class var : std::uint8_t { x, y, z, t, y1, y2, z1, z2 };

inline constexpr std::size_t var_count = 8;

inline const char *var_name(var v)
{
    static constexpr const char *names[] = {"x", "y", "z", "t", "y1", "y2", "z1", "z2"};
    return names[static_cast<std::size_t>(v)];
}

inline std::optional<var> parse_var(std::string_view s)
{
    for (std::size_t i = 0; i < var_count; ++i) {
        if (s == var_name(static_cast<var>(i))) {
            return static_cast<var>(i);
        }
    }
    return std::nullopt;
}

// Variable sets accepted by the parser in each context.
inline const std::set<var> &field_vars()
{
    static const std::set<var> s{var::x, var::y, var::z};
    return s;
}

inline const std::set<var> &reduced_vars()
{
    static const std::set<var> s{var::x, var::y1, var::y2};
    return s;
}

inline const std::set<var> &pair_vars()
{
    static const std::set<var> s{var::x, var::y1, var::y2, var::z1, var::z2};
    return s;
}

inline const std::set<var> &curve_vars()
{
    static const std::set<var> s{var::t, var::x};
    return s;
}

class expr;

namespace detail
{
struct expr_node;
}

// Immutable expression tree. Copies share structure.
class expr
{
public:
    enum class kind : std::uint8_t { constant, variable, add, sub, mul, div, neg, pow, euler, exp };

    expr() : expr(constant(rational(0))) {}

    static expr constant(const rational &value);
    static expr variable(var v);
    static expr binary(kind k, expr lhs, expr rhs);
    static expr negate(expr e);
    static expr power(expr base, int exponent);
    static expr euler(expr arg);
    static expr exponential(expr arg);

    kind node_kind() const noexcept;
    const rational &value() const;
    var variable_id() const;
    int exponent() const;
    const expr &lhs() const;
    const expr &rhs() const;
    const expr &operand() const
    {
        return lhs();
    }

    bool is_constant() const noexcept
    {
        return node_kind() == kind::constant;
    }

    friend expr operator+(expr a, expr b)
    {
        return binary(kind::add, std::move(a), std::move(b));
    }
    friend expr operator-(expr a, expr b)
    {
        return binary(kind::sub, std::move(a), std::move(b));
    }
    friend expr operator*(expr a, expr b)
    {
        return binary(kind::mul, std::move(a), std::move(b));
    }
    friend expr operator/(expr a, expr b)
    {
        return binary(kind::div, std::move(a), std::move(b));
    }
    friend expr operator-(expr a)
    {
        return negate(std::move(a));
    }

private:
    explicit expr(std::shared_ptr<const detail::expr_node> n) : m_node(std::move(n)) {}

    std::shared_ptr<const detail::expr_node> m_node;
};

namespace detail
{

struct expr_node {
    expr::kind k = expr::kind::constant;
    rational value{0};
    var v = var::x;
    int exponent = 0;
    std::optional<expr> lhs;
    std::optional<expr> rhs;
};

} // namespace detail

inline expr expr::constant(const rational &value)
{
    auto n = std::make_shared<detail::expr_node>();
    n->k = kind::constant;
    n->value = value;
    return expr(std::move(n));
}

inline expr expr::variable(var v)
{
    auto n = std::make_shared<detail::expr_node>();
    n->k = kind::variable;
    n->v = v;
    return expr(std::move(n));
}

inline expr expr::binary(kind k, expr lhs, expr rhs)
{
    auto n = std::make_shared<detail::expr_node>();
    n->k = k;
    n->lhs = std::move(lhs);
    n->rhs = std::move(rhs);
    return expr(std::move(n));
}

inline expr expr::negate(expr e)
{
    auto n = std::make_shared<detail::expr_node>();
    n->k = kind::neg;
    n->lhs = std::move(e);
    return expr(std::move(n));
}

inline expr expr::power(expr base, int exponent)
{
    auto n = std::make_shared<detail::expr_node>();
    n->k = kind::pow;
    n->lhs = std::move(base);
    n->exponent = exponent;
    return expr(std::move(n));
}

inline expr expr::euler(expr arg)
{
    auto n = std::make_shared<detail::expr_node>();
    n->k = kind::euler;
    n->lhs = std::move(arg);
    return expr(std::move(n));
}

inline expr expr::exponential(expr arg)
{
    auto n = std::make_shared<detail::expr_node>();
    n->k = kind::exp;
    n->lhs = std::move(arg);
    return expr(std::move(n));
}

inline expr::kind expr::node_kind() const noexcept
{
    return m_node->k;
}

inline const rational &expr::value() const
{
    return m_node->value;
}

inline var expr::variable_id() const
{
    return m_node->v;
}

inline int expr::exponent() const
{
    return m_node->exponent;
}

inline const expr &expr::lhs() const
{
    return *m_node->lhs;
}

inline const expr &expr::rhs() const
{
    return *m_node->rhs;
}

// ---------------------------------------------------------------------------
// Printing

namespace detail
{

// Binding strength used by the printer: + - (1), * / (2), unary - (3),
// ^ (4), atoms (5).
inline int precedence(const expr &e)
{
    switch (e.node_kind()) {
        case expr::kind::add:
        case expr::kind::sub:
            return 1;
        case expr::kind::mul:
        case expr::kind::div:
            return 2;
        case expr::kind::neg:
            return 3;
        case expr::kind::pow:
            return 4;
        case expr::kind::constant:
            if (e.value().sign() < 0) {
                return 3;
            }
            return boost::multiprecision::denominator(e.value()) == 1 ? 5 : 2;
        default:
            return 5;
    }
}

inline void print(const expr &e, std::string &out);

inline void print_child(const expr &e, int min_prec, std::string &out)
{
    if (precedence(e) < min_prec) {
        out += '(';
        print(e, out);
        out += ')';
    } else {
        print(e, out);
    }
}

inline void print(const expr &e, std::string &out)
{
    switch (e.node_kind()) {
        case expr::kind::constant:
            out += to_string(e.value());
            return;
        case expr::kind::variable:
            out += var_name(e.variable_id());
            return;
        case expr::kind::add:
            print_child(e.lhs(), 1, out);
            out += " + ";
            print_child(e.rhs(), 2, out);
            return;
        case expr::kind::sub:
            print_child(e.lhs(), 1, out);
            out += " - ";
            print_child(e.rhs(), 2, out);
            return;
        case expr::kind::mul:
            print_child(e.lhs(), 2, out);
            out += '*';
            print_child(e.rhs(), 3, out);
            return;
        case expr::kind::div:
            print_child(e.lhs(), 2, out);
            out += '/';
            print_child(e.rhs(), 3, out);
            return;
        case expr::kind::neg:
            out += '-';
            print_child(e.operand(), 3, out);
            return;
        case expr::kind::pow:
            print_child(e.lhs(), 5, out);
            out += '^';
            out += std::to_string(e.exponent());
            return;
        case expr::kind::euler:
            out += "E(";
            print(e.operand(), out);
            out += ')';
            return;
        case expr::kind::exp:
            out += "exp(";
            print(e.operand(), out);
            out += ')';
            return;
    }
}

} // namespace detail

// Grammar text for the expression; parse(to_string(e)) prints identically.
inline std::string to_string(const expr &e)
{
    std::string s;
    detail::print(e, s);
    return s;
}

// ---------------------------------------------------------------------------
// Parsing
//
//   expr   := term (('+'|'-') term)*
//   term   := factor (('*'|'/') factor)*
//   factor := base ('^' ['-'] integer)?
//   base   := number | ident | '(' expr ')' | 'E' '(' expr ')'
//           | 'exp' '(' expr ')' | '-' factor
//
// so that ^ binds tighter than unary minus, which binds tighter than * and /.

struct parse_options {
    std::set<var> allowed = field_vars();
    // E(...) and exp(...) are only meaningful for curve expressions.
    bool allow_series_functions = false;
};

namespace detail
{

class parser
{
public:
    parser(std::string_view text, const parse_options &opts) : m_text(text), m_opts(opts) {}

    expr parse()
    {
        skip_ws();
        if (m_pos == m_text.size()) {
            throw syntax_error("empty expression", m_pos);
        }
        expr e = parse_expr();
        skip_ws();
        if (m_pos != m_text.size()) {
            throw syntax_error(std::string("unexpected '") + m_text[m_pos] + "'", m_pos);
        }
        return e;
    }

private:
    void skip_ws()
    {
        while (m_pos < m_text.size() && std::isspace(static_cast<unsigned char>(m_text[m_pos]))) {
            ++m_pos;
        }
    }

    bool accept(char c)
    {
        skip_ws();
        if (m_pos < m_text.size() && m_text[m_pos] == c) {
            ++m_pos;
            return true;
        }
        return false;
    }

    void expect(char c)
    {
        if (!accept(c)) {
            throw syntax_error(std::string("expected '") + c + "'", m_pos);
        }
    }

    expr parse_expr()
    {
        expr lhs = parse_term();
        while (true) {
            if (accept('+')) {
                lhs = lhs + parse_term();
            } else if (accept('-')) {
                lhs = lhs - parse_term();
            } else {
                return lhs;
            }
        }
    }

    expr parse_term()
    {
        expr lhs = parse_factor();
        while (true) {
            if (accept('*')) {
                lhs = lhs * parse_factor();
            } else if (accept('/')) {
                lhs = lhs / parse_factor();
            } else {
                return lhs;
            }
        }
    }

    expr parse_factor()
    {
        expr base = parse_base();
        if (accept('^')) {
            skip_ws();
            bool negative = accept('-');
            skip_ws();
            const auto start = m_pos;
            while (m_pos < m_text.size() && std::isdigit(static_cast<unsigned char>(m_text[m_pos]))) {
                ++m_pos;
            }
            if (start == m_pos) {
                throw syntax_error("expected integer exponent", m_pos);
            }
            if (m_pos - start > 6) {
                throw syntax_error("exponent too large", start);
            }
            int n = std::stoi(std::string(m_text.substr(start, m_pos - start)));
            return expr::power(std::move(base), negative ? -n : n);
        }
        return base;
    }

    expr parse_base()
    {
        skip_ws();
        if (m_pos == m_text.size()) {
            throw syntax_error("unexpected end of input", m_pos);
        }
        const char c = m_text[m_pos];
        if (c == '-') {
            ++m_pos;
            return -parse_factor();
        }
        if (c == '(') {
            ++m_pos;
            expr e = parse_expr();
            expect(')');
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            return parse_number();
        }
        if (std::isalpha(static_cast<unsigned char>(c))) {
            const auto start = m_pos;
            while (m_pos < m_text.size() && std::isalnum(static_cast<unsigned char>(m_text[m_pos]))) {
                ++m_pos;
            }
            const auto name = m_text.substr(start, m_pos - start);
            if (name == "E" || name == "exp") {
                if (!m_opts.allow_series_functions) {
                    throw unknown_identifier("'" + std::string(name) + "' is not allowed in a field expression (offset "
                                             + std::to_string(start) + ")");
                }
                expect('(');
                expr arg = parse_expr();
                expect(')');
                return name == "E" ? expr::euler(std::move(arg)) : expr::exponential(std::move(arg));
            }
            auto v = parse_var(name);
            if (!v || !m_opts.allowed.contains(*v)) {
                throw unknown_identifier("unknown identifier '" + std::string(name) + "' at offset "
                                         + std::to_string(start));
            }
            return expr::variable(*v);
        }
        throw syntax_error(std::string("unexpected '") + c + "'", m_pos);
    }

    expr parse_number()
    {
        const auto start = m_pos;
        while (m_pos < m_text.size() && (std::isdigit(static_cast<unsigned char>(m_text[m_pos])) || m_text[m_pos] == '.')) {
            ++m_pos;
        }
        if (m_pos < m_text.size() && (m_text[m_pos] == 'e')) {
            // Exponent only when followed by digits, so that "2exp(x)" is not
            // misread.
            auto p = m_pos + 1;
            if (p < m_text.size() && (m_text[p] == '+' || m_text[p] == '-')) {
                ++p;
            }
            if (p < m_text.size() && std::isdigit(static_cast<unsigned char>(m_text[p]))) {
                m_pos = p;
                while (m_pos < m_text.size() && std::isdigit(static_cast<unsigned char>(m_text[m_pos]))) {
                    ++m_pos;
                }
            }
        }
        try {
            return expr::constant(parse_rational(m_text.substr(start, m_pos - start)));
        } catch (const error &) {
            throw syntax_error("malformed number", start);
        }
    }

    std::string_view m_text;
    const parse_options &m_opts;
    std::size_t m_pos = 0;
};

} // namespace detail

inline expr parse_expr(std::string_view text, const parse_options &opts = {})
{
    return detail::parser(text, opts).parse();
}

inline expr parse_field_expr(std::string_view text)
{
    return parse_expr(text, parse_options{field_vars(), false});
}

// ---------------------------------------------------------------------------
// Structural helpers

inline void collect_vars(const expr &e, std::set<var> &out)
{
    switch (e.node_kind()) {
        case expr::kind::constant:
            return;
        case expr::kind::variable:
            out.insert(e.variable_id());
            return;
        case expr::kind::add:
        case expr::kind::sub:
        case expr::kind::mul:
        case expr::kind::div:
            collect_vars(e.lhs(), out);
            collect_vars(e.rhs(), out);
            return;
        default:
            collect_vars(e.operand(), out);
    }
}

inline std::set<var> variables(const expr &e)
{
    std::set<var> s;
    collect_vars(e, s);
    return s;
}

inline bool uses_series_functions(const expr &e)
{
    switch (e.node_kind()) {
        case expr::kind::constant:
        case expr::kind::variable:
            return false;
        case expr::kind::euler:
        case expr::kind::exp:
            return true;
        case expr::kind::add:
        case expr::kind::sub:
        case expr::kind::mul:
        case expr::kind::div:
            return uses_series_functions(e.lhs()) || uses_series_functions(e.rhs());
        default:
            return uses_series_functions(e.operand());
    }
}

// Replaces variables by expressions; variables without a binding stay.
inline expr substitute(const expr &e, const std::map<var, expr> &bindings)
{
    switch (e.node_kind()) {
        case expr::kind::constant:
            return e;
        case expr::kind::variable: {
            auto it = bindings.find(e.variable_id());
            return it == bindings.end() ? e : it->second;
        }
        case expr::kind::add:
        case expr::kind::sub:
        case expr::kind::mul:
        case expr::kind::div:
            return expr::binary(e.node_kind(), substitute(e.lhs(), bindings), substitute(e.rhs(), bindings));
        case expr::kind::neg:
            return -substitute(e.operand(), bindings);
        case expr::kind::pow:
            return expr::power(substitute(e.lhs(), bindings), e.exponent());
        case expr::kind::euler:
            return expr::euler(substitute(e.operand(), bindings));
        case expr::kind::exp:
            return expr::exponential(substitute(e.operand(), bindings));
    }
    return e;
}

// Constant folding plus the identities 0+a, a*1, a*0, a^1, a^0. Division by
// a literal zero is left in place so evaluation reports it.
inline expr fold_constants(const expr &e)
{
    using k = expr::kind;
    auto is_const = [](const expr &a, long v) { return a.is_constant() && a.value() == v; };
    switch (e.node_kind()) {
        case k::constant:
        case k::variable:
            return e;
        case k::neg: {
            expr a = fold_constants(e.operand());
            if (a.is_constant()) {
                return expr::constant(-a.value());
            }
            return -a;
        }
        case k::pow: {
            expr a = fold_constants(e.lhs());
            const int n = e.exponent();
            if (n == 0) {
                return expr::constant(rational(1));
            }
            if (n == 1) {
                return a;
            }
            if (a.is_constant() && (n > 0 || a.value() != 0)) {
                rational r(1);
                for (int i = 0; i < std::abs(n); ++i) {
                    r *= a.value();
                }
                return expr::constant(n > 0 ? r : rational(1 / r));
            }
            return expr::power(a, n);
        }
        case k::euler:
            return expr::euler(fold_constants(e.operand()));
        case k::exp:
            return expr::exponential(fold_constants(e.operand()));
        default:
            break;
    }
    expr a = fold_constants(e.lhs());
    expr b = fold_constants(e.rhs());
    switch (e.node_kind()) {
        case k::add:
            if (a.is_constant() && b.is_constant()) {
                return expr::constant(a.value() + b.value());
            }
            if (is_const(a, 0)) {
                return b;
            }
            if (is_const(b, 0)) {
                return a;
            }
            return a + b;
        case k::sub:
            if (a.is_constant() && b.is_constant()) {
                return expr::constant(a.value() - b.value());
            }
            if (is_const(b, 0)) {
                return a;
            }
            if (is_const(a, 0)) {
                return -b;
            }
            return a - b;
        case k::mul:
            if (a.is_constant() && b.is_constant()) {
                return expr::constant(a.value() * b.value());
            }
            if (is_const(a, 0) || is_const(b, 0)) {
                return expr::constant(rational(0));
            }
            if (is_const(a, 1)) {
                return b;
            }
            if (is_const(b, 1)) {
                return a;
            }
            return a * b;
        case k::div:
            if (a.is_constant() && b.is_constant() && b.value() != 0) {
                return expr::constant(a.value() / b.value());
            }
            if (is_const(a, 0) && !is_const(b, 0)) {
                return expr::constant(rational(0));
            }
            if (is_const(b, 1)) {
                return a;
            }
            return a / b;
        default:
            return e;
    }
}

// ---------------------------------------------------------------------------
// Numerical evaluation

// Values of all variables; unused slots are ignored.
template <typename T>
struct point_t {
    std::array<T, var_count> values{};

    T &operator[](var v)
    {
        return values[static_cast<std::size_t>(v)];
    }
    const T &operator[](var v) const
    {
        return values[static_cast<std::size_t>(v)];
    }
};

using point = point_t<double>;

namespace detail
{

template <typename T>
T constant_as(const rational &q)
{
    if constexpr (std::is_same_v<T, double>) {
        return q.convert_to<double>();
    } else {
        return T(q);
    }
}

} // namespace detail

// Evaluates a rational expression. Division by zero raises
// evaluation_singularity naming the zero denominator. E(...) has no value
// outside the series ring and is rejected.
template <typename T>
T eval(const expr &e, const point_t<T> &p)
{
    using k = expr::kind;
    switch (e.node_kind()) {
        case k::constant:
            return detail::constant_as<T>(e.value());
        case k::variable:
            return p[e.variable_id()];
        case k::add:
            return eval(e.lhs(), p) + eval(e.rhs(), p);
        case k::sub:
            return eval(e.lhs(), p) - eval(e.rhs(), p);
        case k::mul:
            return eval(e.lhs(), p) * eval(e.rhs(), p);
        case k::div: {
            T den = eval(e.rhs(), p);
            if (den == 0) {
                throw evaluation_singularity("division by zero", to_string(e.rhs()));
            }
            return T(eval(e.lhs(), p) / den);
        }
        case k::neg:
            return T(-eval(e.operand(), p));
        case k::pow: {
            T b = eval(e.lhs(), p);
            const int n = e.exponent();
            if (n < 0 && b == 0) {
                throw evaluation_singularity("division by zero", to_string(e.lhs()));
            }
            T r(1);
            for (int i = 0; i < std::abs(n); ++i) {
                r = T(r * b);
            }
            return n < 0 ? T(T(1) / r) : r;
        }
        case k::exp: {
            using std::exp;
            return T(exp(eval(e.operand(), p)));
        }
        case k::euler:
            throw error("E(...) denotes a divergent series and cannot be evaluated at a point: " + to_string(e));
    }
    return T(0);
}

inline double eval(const expr &e, const point &p)
{
    return eval<double>(e, p);
}

} // namespace pencil

#endif
