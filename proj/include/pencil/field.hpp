#ifndef PENCIL_FIELD_HPP
#define PENCIL_FIELD_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <pencil/curve.hpp>
#include <pencil/error.hpp>
#include <pencil/expr.hpp>
#include <pencil/rational_function.hpp>
#include <pencil/series.hpp>
#include <pencil/series_eval.hpp>

namespace pencil
{

// xi = xi_x d/dx + xi_y d/dy + xi_z d/dz with rational components in (x, y, z).
class vector_field3
{
public:
    vector_field3(std::string name, expr xi_x, expr xi_y, expr xi_z)
        : m_name(std::move(name)), m_xi{std::move(xi_x), std::move(xi_y), std::move(xi_z)}
    {
        for (const auto &c : m_xi) {
            if (uses_series_functions(c)) {
                throw error("field components must be rational expressions", error_class::usage);
            }
            for (var v : variables(c)) {
                if (!field_vars().contains(v)) {
                    throw unknown_identifier(std::string("field component uses '") + var_name(v) + "'");
                }
            }
        }
        if (std::all_of(m_xi.begin(), m_xi.end(), [](const expr &e) {
                const expr f = fold_constants(e);
                return f.is_constant() && f.value() == 0;
            })) {
            throw error("vector field has no nonzero component", error_class::usage);
        }
    }

    static vector_field3 parse(std::string name, std::string_view xi_x, std::string_view xi_y, std::string_view xi_z)
    {
        return vector_field3(std::move(name), parse_field_expr(xi_x), parse_field_expr(xi_y), parse_field_expr(xi_z));
    }

    const std::string &name() const noexcept
    {
        return m_name;
    }
    const std::array<expr, 3> &components() const noexcept
    {
        return m_xi;
    }
    const expr &operator[](std::size_t i) const
    {
        return m_xi.at(i);
    }

private:
    std::string m_name;
    std::array<expr, 3> m_xi;
};

// dy1/dx = f1(x, y1, y2), dy2/dx = f2(x, y1, y2).
struct reduced_system {
    expr f1;
    expr f2;
    std::string provenance = "direct";

    static reduced_system parse(std::string_view f1, std::string_view f2, std::string provenance = "direct")
    {
        const parse_options opts{reduced_vars(), false};
        return {parse_expr(f1, opts), parse_expr(f2, opts), std::move(provenance)};
    }
};

// The reduced system together with the equations of the gap z = delta - gamma:
// f3 = f1(x, y1+z1, y2+z2) - f1(x, y1, y2), f4 likewise from f2.
struct difference_system {
    expr f1;
    expr f2;
    expr f3;
    expr f4;
    std::string provenance;
};

// Components of a 3-curve bound to x, y, z.
template <coefficient R>
series_bindings<R> curve_bindings(const formal_curve<R> &c)
{
    if (c.dim() != 3) {
        throw error("a curve in (x, y, z) needs three components", error_class::usage);
    }
    series_bindings<R> b;
    b.order = c.order();
    b.division = division_policy::unit_only;
    b.vars.emplace(var::x, c[0]);
    b.vars.emplace(var::y, c[1]);
    b.vars.emplace(var::z, c[2]);
    return b;
}

template <coefficient R>
truncated_series<R> substitute_series(const expr &e, const formal_curve<R> &c)
{
    return evaluate_series(e, curve_bindings(c));
}

template <coefficient R>
struct invariance_report {
    bool invariant = false;
    // h with xi(C(t)) = h(t) C'(t); empty when no series multiplier exists.
    std::optional<truncated_series<R>> multiplier;
    std::vector<truncated_series<R>> residual;
    std::size_t checked_order = 0;
    std::size_t pivot = 0;
    std::size_t pivot_valuation = 0;
    double max_abs_residual = 0;
    // max_k |r_k| / max(|xi_j(C)_k|, |(h C_j')_k|); meaningful in big-float mode.
    double max_rel_residual = 0;
    double tolerance = 0;
};

// Tests xi(C(t)) = h(t) C'(t) modulo t^{N+1-v}, where v is the valuation of
// the pivot derivative. Exact mode demands identically zero residuals; in
// big-float mode residual coefficients must stay below `tolerance`.
template <coefficient R>
invariance_report<R> invariance_check(const vector_field3 &xi, const formal_curve<R> &c, std::size_t N,
                                      double tolerance = 0)
{
    if (c.order() < N + 1) {
        throw order_exceeded("invariance check to order " + std::to_string(N) + " needs curve order "
                             + std::to_string(N + 1) + ", got " + std::to_string(c.order()));
    }
    const auto cc = c.oriented().truncated(N + 1);
    std::vector<truncated_series<R>> deriv;
    for (const auto &s : cc.components()) {
        deriv.push_back(derive(s));
    }
    std::size_t pivot = 0, v = infinite_valuation;
    for (std::size_t i = 0; i < deriv.size(); ++i) {
        if (deriv[i].valuation() < v) {
            v = deriv[i].valuation();
            pivot = i;
        }
    }
    if (v == infinite_valuation) {
        throw constant_curve("every component of the curve is constant to order " + std::to_string(N));
    }
    std::vector<truncated_series<R>> along;
    for (std::size_t j = 0; j < 3; ++j) {
        along.push_back(substitute_series(xi[j], cc).truncated(N));
    }

    invariance_report<R> rep;
    rep.pivot = pivot;
    rep.pivot_valuation = v;
    rep.checked_order = N - v;
    rep.tolerance = tolerance;
    const auto n = rep.checked_order;

    if (along[pivot].valuation() < v) {
        // xi_pivot(C) is not divisible by t^v: no series multiplier.
        for (std::size_t j = 0; j < 3; ++j) {
            rep.residual.push_back(j == pivot ? along[j].truncated(n) : truncated_series<R>::zero(n));
        }
    } else {
        const auto h = divide(shift_down(along[pivot], v), shift_down(deriv[pivot], v)).with_var("t");
        for (std::size_t j = 0; j < 3; ++j) {
            const auto hc = h * deriv[j].truncated(n);
            const auto r = (along[j].truncated(n) - hc).with_var("t");
            for (std::size_t k = 0; k <= n; ++k) {
                const double mag = coefficient_traits<R>::magnitude(r[k]);
                if (mag == 0) {
                    continue;
                }
                const double scale = std::max(coefficient_traits<R>::magnitude(along[j][k]),
                                              coefficient_traits<R>::magnitude(hc[k]));
                rep.max_rel_residual = std::max(rep.max_rel_residual, scale > 0 ? mag / scale : mag);
            }
            rep.residual.push_back(r);
        }
        rep.multiplier = h;
    }
    for (const auto &r : rep.residual) {
        for (const auto &a : r.coeffs()) {
            rep.max_abs_residual = std::max(rep.max_abs_residual, coefficient_traits<R>::magnitude(a));
        }
    }
    const bool all_zero = std::all_of(rep.residual.begin(), rep.residual.end(), [](const auto &r) { return r.is_zero(); });
    if constexpr (is_exact_v<R>) {
        rep.invariant = rep.multiplier.has_value() && all_zero;
    } else {
        rep.invariant = rep.multiplier.has_value() && (all_zero || rep.max_abs_residual < tolerance);
    }
    return rep;
}

namespace detail
{

// True when e evaluates to zero at every one of a batch of random points.
inline bool vanishes_at_random_points(const expr &e, unsigned seed = 1)
{
    std::mt19937 gen(seed);
    std::uniform_real_distribution<double> dist(0.05, 1.5);
    for (int i = 0; i < 16; ++i) {
        point p;
        for (auto &a : p.values) {
            a = dist(gen);
        }
        try {
            if (eval(e, p) != 0) {
                return false;
            }
        } catch (const evaluation_singularity &) {
            return false;
        }
    }
    return true;
}

} // namespace detail

// Divides by dx(xi) in the x-chart: f1 = xi_y/xi_x, f2 = xi_z/xi_x with
// y -> y1, z -> y2.
inline reduced_system chart_reduce(const vector_field3 &xi)
{
    const expr den = fold_constants(xi[0]);
    if ((den.is_constant() && den.value() == 0) || detail::vanishes_at_random_points(den)) {
        throw non_adapted_chart("field '" + xi.name() + "' has dx(xi) = 0; the x-chart is not adapted");
    }
    const std::map<var, expr> rename{{var::y, expr::variable(var::y1)}, {var::z, expr::variable(var::y2)}};
    const expr d = substitute(den, rename);
    return {fold_constants(substitute(xi[1], rename) / d), fold_constants(substitute(xi[2], rename) / d), xi.name()};
}

// The differences are expanded over a common denominator so that the terms
// free of z cancel exactly; evaluated naively, f1(y+z) - f1(y) loses all
// relative accuracy once |z| is far below |y|.
inline difference_system make_difference_system(const reduced_system &r)
{
    const std::map<var, expr> shifted{{var::y1, expr::variable(var::y1) + expr::variable(var::z1)},
                                      {var::y2, expr::variable(var::y2) + expr::variable(var::z2)}};
    auto gap = [&](const expr &f) {
        return (to_rational_function(substitute(f, shifted)) - to_rational_function(f)).to_expr();
    };
    return {r.f1, r.f2, gap(r.f1), gap(r.f2), r.provenance};
}

// f1(x, y1+z1, y2+z2) - f1(x, y1, y2) exactly as written, without expansion.
inline std::array<expr, 2> literal_differences(const reduced_system &r)
{
    const std::map<var, expr> shifted{{var::y1, expr::variable(var::y1) + expr::variable(var::z1)},
                                      {var::y2, expr::variable(var::y2) + expr::variable(var::z2)}};
    return {substitute(r.f1, shifted) - r.f1, substitute(r.f2, shifted) - r.f2};
}

} // namespace pencil

#endif
