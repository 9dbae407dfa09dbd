#ifndef PENCIL_CURVE_HPP
#define PENCIL_CURVE_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <pencil/coefficient.hpp>
#include <pencil/error.hpp>
#include <pencil/expr.hpp>
#include <pencil/series.hpp>
#include <pencil/series_eval.hpp>
#include <pencil/trajectory.hpp>

namespace pencil
{

enum class half_branch { positive, negative };

inline const char *to_string(half_branch b)
{
    return b == half_branch::positive ? "+" : "-";
}

// A formal parameterised curve t -> (c_1(t), ..., c_m(t)) with every
// component in t R[[t]], together with the half-branch (sign of t) it
// describes.
template <coefficient R>
class formal_curve
{
public:
    formal_curve() = default;

    explicit formal_curve(std::vector<truncated_series<R>> components, half_branch branch = half_branch::positive)
        : m_components(std::move(components)), m_branch(branch)
    {
        if (m_components.size() < 2) {
            throw degenerate_curve("a formal curve needs at least two components");
        }
        bool all_zero = true;
        for (std::size_t i = 0; i < m_components.size(); ++i) {
            const auto &c = m_components[i];
            if (!pencil::is_zero(c[0])) {
                throw degenerate_curve("component " + std::to_string(i) + " has a nonzero constant term");
            }
            all_zero = all_zero && c.is_zero();
        }
        if (all_zero) {
            throw degenerate_curve("all components vanish identically");
        }
    }

    std::size_t dim() const noexcept
    {
        return m_components.size();
    }
    const std::vector<truncated_series<R>> &components() const noexcept
    {
        return m_components;
    }
    const truncated_series<R> &operator[](std::size_t i) const
    {
        return m_components.at(i);
    }
    half_branch branch() const noexcept
    {
        return m_branch;
    }

    // Smallest order among the components.
    std::size_t order() const
    {
        std::size_t n = m_components.front().order();
        for (const auto &c : m_components) {
            n = std::min(n, c.order());
        }
        return n;
    }

    // Smallest component valuation.
    std::size_t valuation() const
    {
        std::size_t v = infinite_valuation;
        for (const auto &c : m_components) {
            v = std::min(v, c.valuation());
        }
        return v;
    }

    formal_curve truncated(std::size_t order) const
    {
        std::vector<truncated_series<R>> c;
        for (const auto &s : m_components) {
            c.push_back(s.truncated(order));
        }
        return formal_curve(std::move(c), m_branch);
    }

    // c(-t) viewed as a curve on the positive half-branch.
    formal_curve oriented() const
    {
        if (m_branch == half_branch::positive) {
            return *this;
        }
        std::vector<truncated_series<R>> c;
        for (const auto &s : m_components) {
            std::vector<R> a = s.coeffs();
            for (std::size_t k = 1; k < a.size(); k += 2) {
                a[k] = -a[k];
            }
            c.emplace_back(std::move(a), s.var_name());
        }
        return formal_curve(std::move(c), half_branch::positive);
    }

private:
    std::vector<truncated_series<R>> m_components;
    half_branch m_branch = half_branch::positive;
};

// C(t) = (t^nu, theta_1(t), theta_2(t)).
template <coefficient R>
struct puiseux_curve {
    std::size_t ramification = 1;
    std::array<truncated_series<R>, 2> theta;
    half_branch branch = half_branch::positive;

    formal_curve<R> as_formal() const
    {
        const auto n = std::min(theta[0].order(), theta[1].order());
        return formal_curve<R>({truncated_series<R>::monomial(ramification, n), theta[0], theta[1]}, branch);
    }
};

template <coefficient R>
struct leading_term {
    std::vector<R> direction;
    std::size_t valuation;
};

// Coefficients of t^v in each (oriented) component, v the minimal valuation.
template <coefficient R>
leading_term<R> leading_direction(const formal_curve<R> &c)
{
    const auto oc = c.oriented();
    const auto v = oc.valuation();
    if (v == infinite_valuation) {
        throw degenerate_curve("zero curve has no tangent direction");
    }
    leading_term<R> lt{{}, v};
    for (const auto &s : oc.components()) {
        lt.direction.push_back(v <= s.order() ? s[v] : R(0));
    }
    return lt;
}

template <coefficient R>
std::vector<double> unit_vector(const std::vector<R> &d)
{
    double n2 = 0;
    std::vector<double> u;
    for (const auto &a : d) {
        u.push_back(coefficient_traits<R>::to_double(a));
        n2 += u.back() * u.back();
    }
    const double n = std::sqrt(n2);
    for (auto &a : u) {
        a /= n;
    }
    return u;
}

template <coefficient R>
struct tangent_step {
    // Un-normalised direction (leading coefficients); unit() normalises.
    std::vector<R> direction;
    double norm = 0;
    std::size_t chart_index = 0;
    std::size_t pivot_valuation = 0;
    formal_curve<R> transformed;

    std::vector<double> unit() const
    {
        return unit_vector(direction);
    }
};

// One spherical blow-up at the origin in the directional chart of the
// pivot component (lowest index among those of minimal valuation v):
// the pivot is kept, every other component c_j becomes c_j/c_i minus its
// constant term. The known order drops by v.
template <coefficient R>
tangent_step<R> spherical_blowup_step(const formal_curve<R> &c)
{
    const auto oc = c.oriented();
    const auto lt = leading_direction(oc);
    const auto v = lt.valuation;
    std::size_t pivot = 0;
    while (oc[pivot].valuation() != v) {
        ++pivot;
    }
    const auto n = oc.order();
    if (n < v + 1) {
        throw order_exceeded("blow-up needs order >= " + std::to_string(v + 1) + ", curve has order "
                             + std::to_string(n));
    }
    const auto new_order = n - v;
    const auto pivot_unit = shift_down(oc[pivot].truncated(n), v);
    std::vector<truncated_series<R>> comps;
    for (std::size_t j = 0; j < oc.dim(); ++j) {
        if (j == pivot) {
            comps.push_back(oc[j].truncated(new_order));
            continue;
        }
        auto q = divide(shift_down(oc[j].truncated(n), v), pivot_unit);
        std::vector<R> a = q.coeffs();
        a[0] = R(0);
        comps.emplace_back(std::move(a), oc[j].var_name());
    }
    tangent_step<R> step;
    step.direction = lt.direction;
    double n2 = 0;
    for (const auto &a : lt.direction) {
        const double d = coefficient_traits<R>::to_double(a);
        n2 += d * d;
    }
    step.norm = std::sqrt(n2);
    step.chart_index = pivot;
    step.pivot_valuation = v;
    step.transformed = formal_curve<R>(std::move(comps), half_branch::positive);
    return step;
}

template <coefficient R>
std::vector<tangent_step<R>> iterated_tangents(const formal_curve<R> &c, std::size_t steps)
{
    if (steps > 0 && c.order() < steps + 1) {
        throw order_exceeded(std::to_string(steps) + " blow-ups need order >= " + std::to_string(steps + 1)
                             + ", curve has order " + std::to_string(c.order()));
    }
    std::vector<tangent_step<R>> out;
    formal_curve<R> cur = c;
    for (std::size_t i = 0; i < steps; ++i) {
        out.push_back(spherical_blowup_step(cur));
        cur = out.back().transformed;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Curve literals: comma-separated component expressions in a single
// parameter (t or x) using rational constants, + - * / ^, E(...) and exp(...).

inline std::vector<std::string> split_top_level(std::string_view text, char sep)
{
    std::vector<std::string> parts;
    int depth = 0;
    std::string cur;
    for (char ch : text) {
        if (ch == '(') {
            ++depth;
        } else if (ch == ')') {
            --depth;
        }
        if (ch == sep && depth == 0) {
            parts.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(ch);
        }
    }
    parts.push_back(cur);
    return parts;
}

inline std::vector<expr> parse_curve_exprs(std::string_view text)
{
    std::vector<expr> out;
    std::set<var> used;
    for (const auto &part : split_top_level(text, ',')) {
        out.push_back(parse_expr(part, parse_options{curve_vars(), true}));
        collect_vars(out.back(), used);
    }
    if (used.size() > 1) {
        throw unknown_identifier("a curve literal must use a single parameter (t or x)");
    }
    return out;
}

// Evaluates a curve literal to the requested order. Divisions by t^v lose
// order, so the working order is raised until every component is known to
// `order`.
template <coefficient R>
formal_curve<R> parse_curve(std::string_view text, std::size_t order, half_branch branch = half_branch::positive)
{
    const auto exprs = parse_curve_exprs(text);
    std::size_t work = order;
    for (int attempt = 0; attempt < 8; ++attempt) {
        series_bindings<R> b;
        b.order = work;
        b.division = division_policy::shift_valuation;
        const auto param = truncated_series<R>::monomial(1, work, R(1)).with_var("t");
        b.vars.emplace(var::t, param);
        b.vars.emplace(var::x, param);
        std::vector<truncated_series<R>> comps;
        std::size_t got = work;
        for (const auto &e : exprs) {
            comps.push_back(evaluate_series(e, b).with_var("t"));
            got = std::min(got, comps.back().order());
        }
        if (got >= order) {
            for (auto &c : comps) {
                c = c.truncated(order);
            }
            return formal_curve<R>(std::move(comps), branch);
        }
        work += order - got;
    }
    throw order_exceeded("could not evaluate curve literal to order " + std::to_string(order));
}

// ---------------------------------------------------------------------------
// Empirical check of ||gamma(t^nu) - J_N theta(t)|| = o(t^N) along a
// numerical trajectory of the reduced system.

struct deviation_probe {
    double x;
    double deviation;
    double empirical_order;
};

template <coefficient R>
std::vector<deviation_probe> asymptotic_deviation(const trajectory &traj, const puiseux_curve<R> &c, std::size_t N,
                                                  const std::vector<double> &probes, unsigned precision_bits = 128)
{
    if (traj.dim() < 2) {
        throw error("asymptotic_deviation needs a planar trajectory", error_class::usage);
    }
    const auto j0 = truncate_J(c.theta[0], std::min(N, c.theta[0].order()));
    const auto j1 = truncate_J(c.theta[1], std::min(N, c.theta[1].order()));
    if (N > c.theta[0].order() || N > c.theta[1].order()) {
        throw order_exceeded("J_" + std::to_string(N) + " needs the curve to order " + std::to_string(N));
    }
    precision_scope scope(precision_bits);
    std::vector<deviation_probe> out;
    for (double x : probes) {
        if (!(x > 0) || !traj.contains(x)) {
            throw domain_error("probe x = " + std::to_string(x) + " outside the trajectory domain");
        }
        big_float t = boost::multiprecision::pow(big_float(x), big_float(1) / big_float(c.ramification));
        if (c.branch == half_branch::negative) {
            t = -t;
        }
        const auto y = traj.value(x);
        const big_float d0 = big_float(y[0]) - evaluate(j0, t);
        const big_float d1 = big_float(y[1]) - evaluate(j1, t);
        const double dev = boost::multiprecision::sqrt(d0 * d0 + d1 * d1).template convert_to<double>();
        out.push_back({x, dev, std::log(dev) / std::log(x)});
    }
    return out;
}

} // namespace pencil

#endif
