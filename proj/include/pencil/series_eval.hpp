#ifndef PENCIL_SERIES_EVAL_HPP
#define PENCIL_SERIES_EVAL_HPP

#include <cstddef>
#include <cstdlib>
#include <map>
#include <string>

#include <pencil/error.hpp>
#include <pencil/expr.hpp>
#include <pencil/series.hpp>

namespace pencil
{

enum class division_policy {
    // Denominators must be units (fields evaluated along curves).
    unit_only,
    // A denominator of valuation v > 0 is accepted when the numerator is
    // divisible by x^v; the known order drops by v (curve literals such as
    // E(t)/t).
    shift_valuation,
};

template <coefficient R>
struct series_bindings {
    std::map<var, truncated_series<R>> vars;
    // Order given to constants and to E(...) before composition.
    std::size_t order = 0;
    division_policy division = division_policy::unit_only;
};

template <coefficient R>
truncated_series<R> evaluate_series(const expr &e, const series_bindings<R> &b)
{
    using k = expr::kind;
    switch (e.node_kind()) {
        case k::constant:
            return truncated_series<R>::constant(coefficient_traits<R>::from_rational(e.value()), b.order);
        case k::variable: {
            auto it = b.vars.find(e.variable_id());
            if (it == b.vars.end()) {
                throw unknown_identifier(std::string("variable '") + var_name(e.variable_id())
                                         + "' is not bound to a series");
            }
            return it->second;
        }
        case k::add:
            return evaluate_series(e.lhs(), b) + evaluate_series(e.rhs(), b);
        case k::sub:
            return evaluate_series(e.lhs(), b) - evaluate_series(e.rhs(), b);
        case k::mul:
            return evaluate_series(e.lhs(), b) * evaluate_series(e.rhs(), b);
        case k::neg:
            return -evaluate_series(e.operand(), b);
        case k::div: {
            auto num = evaluate_series(e.lhs(), b);
            auto den = evaluate_series(e.rhs(), b);
            const auto v = den.valuation();
            if (v == 0) {
                return divide(num, den);
            }
            if (b.division == division_policy::unit_only || v == infinite_valuation) {
                throw non_unit_denominator("denominator " + to_string(e.rhs()) + " has valuation "
                                           + (v == infinite_valuation ? std::string("inf") : std::to_string(v))
                                           + " along the curve");
            }
            return divide(shift_down(num, v), shift_down(den, v));
        }
        case k::pow: {
            auto base = evaluate_series(e.lhs(), b);
            const int n = e.exponent();
            auto r = truncated_series<R>::one(base.order());
            for (int i = 0; i < std::abs(n); ++i) {
                r = r * base;
            }
            if (n < 0) {
                if (pencil::is_zero(base[0])) {
                    throw non_unit_denominator("negative power of " + to_string(e.lhs())
                                               + " which vanishes along the curve");
                }
                r = inverse(r);
            }
            return r;
        }
        case k::euler: {
            auto arg = evaluate_series(e.operand(), b);
            return compose(euler_series<R>(arg.order()), arg);
        }
        case k::exp:
            return exp_series(evaluate_series(e.operand(), b));
    }
    throw error("unreachable expression kind");
}

} // namespace pencil

#endif
