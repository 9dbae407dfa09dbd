#ifndef PENCIL_INTEGRATE_HPP
#define PENCIL_INTEGRATE_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <pencil/error.hpp>
#include <pencil/expr.hpp>
#include <pencil/field.hpp>
#include <pencil/trajectory.hpp>

namespace pencil
{

// dy/dx = f(x, y), written into dy.
using rhs_function = std::function<void(double x, std::span<const double> y, std::span<double> dy)>;

enum class log_substitution { automatic, on, off };

struct ivp {
    rhs_function rhs;
    std::size_t dim = 0;
    double x_start = 1;
    double x_end = 0.1;
    std::vector<double> y0;
    double rtol = 1e-10;
    double atol = 1e-12;
    std::size_t max_steps = 1000000;
    log_substitution substitution = log_substitution::automatic;
    // Substitute s = log x when x_end / x_start falls below this ratio.
    double log_threshold = 1e-2;
    // The last `relative_tail` components are weighted by their block norm
    // instead of atol, so a gap far below the scale of the other components
    // keeps full relative accuracy.
    std::size_t relative_tail = 0;
    std::vector<std::string> names;
};

namespace detail
{

// Dormand-Prince 5(4) tableau.
struct dopri {
    static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
    static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                            a65 = -5103.0 / 18656;
    static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                            b6 = 11.0 / 84;
    static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                            e6 = 22.0 / 525, e7 = -1.0 / 40;
};

inline bool all_finite(std::span<const double> v)
{
    return std::all_of(v.begin(), v.end(), [](double a) { return std::isfinite(a); });
}

} // namespace detail

// Adaptive Dormand-Prince 5(4) integration from x_start to x_end (either
// direction, x > 0 throughout when the log substitution is active).
inline trajectory solve(const ivp &p)
{
    if (p.dim == 0 || p.y0.size() != p.dim || !p.rhs) {
        throw error("initial value problem is incomplete", error_class::usage);
    }
    if (!(p.rtol > 0) || !(p.atol > 0) || p.x_start == p.x_end || p.relative_tail > p.dim) {
        throw error("invalid tolerances or interval", error_class::usage);
    }
    const bool use_log = p.substitution == log_substitution::on
                         || (p.substitution == log_substitution::automatic && p.x_start > 0 && p.x_end > 0
                             && p.x_end / p.x_start < p.log_threshold);
    if (use_log && !(p.x_start > 0 && p.x_end > 0)) {
        throw error("log substitution needs a positive interval", error_class::usage);
    }

    const std::size_t n = p.dim;
    double last_x = p.x_start;
    // g(u, y): right-hand side in the integration variable u (x or log x).
    auto g = [&](double u, std::span<const double> y, std::span<double> dy) {
        const double x = use_log ? std::exp(u) : u;
        try {
            p.rhs(x, y, dy);
        } catch (const evaluation_singularity &e) {
            throw chart_violation(std::string("right-hand side singular (") + e.what() + ") at x = "
                                      + std::to_string(x),
                                  last_x);
        }
        if (!detail::all_finite(dy)) {
            throw blowup_error("right-hand side overflowed at x = " + std::to_string(x), last_x);
        }
        if (use_log) {
            for (auto &d : dy) {
                d *= x;
            }
        }
    };
    const double u0 = use_log ? std::log(p.x_start) : p.x_start;
    const double u1 = use_log ? std::log(p.x_end) : p.x_end;
    const double dir = u1 > u0 ? 1.0 : -1.0;

    auto err_scale = [&](std::span<const double> ya, std::span<const double> yb, std::vector<double> &sc) {
        const std::size_t head = n - p.relative_tail;
        for (std::size_t j = 0; j < head; ++j) {
            sc[j] = p.atol + p.rtol * std::max(std::fabs(ya[j]), std::fabs(yb[j]));
        }
        if (p.relative_tail > 0) {
            double na = 0, nb = 0;
            for (std::size_t j = head; j < n; ++j) {
                na += ya[j] * ya[j];
                nb += yb[j] * yb[j];
            }
            const double s = std::max(p.rtol * std::sqrt(std::max(na, nb)), 1e-300);
            for (std::size_t j = head; j < n; ++j) {
                sc[j] = s;
            }
        }
    };

    std::vector<double> y(p.y0), k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), yt(n), ynew(n), sc(n);
    g(u0, y, k1);

    // Initial step (Hairer, Norsett & Wanner, II.4).
    double h;
    {
        err_scale(y, y, sc);
        double d0 = 0, d1 = 0;
        for (std::size_t j = 0; j < n; ++j) {
            d0 += (y[j] / sc[j]) * (y[j] / sc[j]);
            d1 += (k1[j] / sc[j]) * (k1[j] / sc[j]);
        }
        d0 = std::sqrt(d0 / n);
        d1 = std::sqrt(d1 / n);
        double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
        h0 = std::min(h0, std::fabs(u1 - u0));
        for (std::size_t j = 0; j < n; ++j) {
            yt[j] = y[j] + dir * h0 * k1[j];
        }
        g(u0 + dir * h0, yt, k2);
        double d2 = 0;
        for (std::size_t j = 0; j < n; ++j) {
            const double t = (k2[j] - k1[j]) / sc[j];
            d2 += t * t;
        }
        d2 = std::sqrt(d2 / n) / h0;
        const double h1 = std::max(d1, d2) <= 1e-15 ? std::max(1e-6, h0 * 1e-3)
                                                    : std::pow(0.01 / std::max(d1, d2), 1.0 / 5);
        h = std::min({100 * h0, h1, std::fabs(u1 - u0)});
    }

    auto to_x = [&](double u) { return use_log ? std::exp(u) : u; };
    std::vector<double> grid{p.x_start}, values(y), derivs(n);
    auto push_deriv = [&](double x, std::span<const double> ku) {
        for (std::size_t j = 0; j < n; ++j) {
            derivs[derivs.size() - n + j] = use_log ? ku[j] / x : ku[j];
        }
    };
    push_deriv(p.x_start, k1);

    trajectory_stats stats{p.rtol, p.atol, 0, 0, use_log};
    double u = u0;
    using D = detail::dopri;
    while (dir * (u1 - u) > 0) {
        if (stats.accepted_steps + stats.rejected_steps >= p.max_steps) {
            throw integration_error("maximum number of steps (" + std::to_string(p.max_steps) + ") reached at x = "
                                        + std::to_string(to_x(u)),
                                    to_x(u));
        }
        bool last = false;
        if (h >= std::fabs(u1 - u) * (1 - 1e-12)) {
            h = std::fabs(u1 - u);
            last = true;
        }
        const double x = to_x(u);
        const double xh = to_x(u + dir * h);
        if (!last && std::fabs(xh - x) < 1e-14 * std::fabs(x)) {
            throw stiffness_error("step size underflow at x = " + std::to_string(x), x);
        }
        const double s = dir * h;
        for (std::size_t j = 0; j < n; ++j) {
            yt[j] = y[j] + s * D::a21 * k1[j];
        }
        g(u + D::c2 * s, yt, k2);
        for (std::size_t j = 0; j < n; ++j) {
            yt[j] = y[j] + s * (D::a31 * k1[j] + D::a32 * k2[j]);
        }
        g(u + D::c3 * s, yt, k3);
        for (std::size_t j = 0; j < n; ++j) {
            yt[j] = y[j] + s * (D::a41 * k1[j] + D::a42 * k2[j] + D::a43 * k3[j]);
        }
        g(u + D::c4 * s, yt, k4);
        for (std::size_t j = 0; j < n; ++j) {
            yt[j] = y[j] + s * (D::a51 * k1[j] + D::a52 * k2[j] + D::a53 * k3[j] + D::a54 * k4[j]);
        }
        g(u + D::c5 * s, yt, k5);
        for (std::size_t j = 0; j < n; ++j) {
            yt[j] = y[j] + s * (D::a61 * k1[j] + D::a62 * k2[j] + D::a63 * k3[j] + D::a64 * k4[j] + D::a65 * k5[j]);
        }
        const double unew = last ? u1 : u + s;
        g(u + s, yt, k6);
        for (std::size_t j = 0; j < n; ++j) {
            ynew[j] = y[j] + s * (D::b1 * k1[j] + D::b3 * k3[j] + D::b4 * k4[j] + D::b5 * k5[j] + D::b6 * k6[j]);
        }
        if (!detail::all_finite(ynew)) {
            throw blowup_error("solution overflowed near x = " + std::to_string(x), x);
        }
        g(unew, ynew, k7);
        err_scale(y, ynew, sc);
        double err = 0;
        for (std::size_t j = 0; j < n; ++j) {
            const double e = s
                             * (D::e1 * k1[j] + D::e3 * k3[j] + D::e4 * k4[j] + D::e5 * k5[j] + D::e6 * k6[j]
                                + D::e7 * k7[j]);
            err += (e / sc[j]) * (e / sc[j]);
        }
        err = std::sqrt(err / n);
        if (!std::isfinite(err)) {
            throw blowup_error("error estimate overflowed near x = " + std::to_string(x), x);
        }
        if (err <= 1) {
            ++stats.accepted_steps;
            u = unew;
            y.swap(ynew);
            k1.swap(k7);
            const double xn = last ? p.x_end : to_x(u);
            last_x = xn;
            grid.push_back(xn);
            values.insert(values.end(), y.begin(), y.end());
            derivs.resize(derivs.size() + n);
            push_deriv(xn, k1);
            const double fac = err == 0 ? 5.0 : std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
            h *= fac;
            if (last) {
                break;
            }
        } else {
            ++stats.rejected_steps;
            h *= std::max(0.2, 0.9 * std::pow(err, -0.2));
        }
    }
    return trajectory(n, std::move(grid), std::move(values), std::move(derivs), p.names, stats);
}

namespace detail
{

// Fast evaluation of a fixed list of expressions with variables bound from a
// state vector.
inline rhs_function compile_rhs(std::vector<expr> exprs, std::vector<var> state_vars)
{
    return [exprs = std::move(exprs), vars = std::move(state_vars)](double x, std::span<const double> y,
                                                                    std::span<double> dy) {
        point pt;
        pt[var::x] = x;
        for (std::size_t j = 0; j < vars.size(); ++j) {
            pt[vars[j]] = y[j];
        }
        for (std::size_t j = 0; j < exprs.size(); ++j) {
            dy[j] = eval(exprs[j], pt);
        }
    };
}

} // namespace detail

inline ivp make_ivp(const reduced_system &r, double x_start, double x_end, std::array<double, 2> y0)
{
    ivp p;
    p.rhs = detail::compile_rhs({r.f1, r.f2}, {var::y1, var::y2});
    p.dim = 2;
    p.x_start = x_start;
    p.x_end = x_end;
    p.y0 = {y0[0], y0[1]};
    p.names = {"y1", "y2"};
    return p;
}

// Joint (gamma, eps) problem on the difference system; state (y1, y2, z1, z2).
inline ivp make_pair_ivp(const difference_system &d, double x_start, double x_end, std::array<double, 2> y0,
                         std::array<double, 2> eps0)
{
    ivp p;
    p.rhs = detail::compile_rhs({d.f1, d.f2, d.f3, d.f4}, {var::y1, var::y2, var::z1, var::z2});
    p.dim = 4;
    p.x_start = x_start;
    p.x_end = x_end;
    p.y0 = {y0[0], y0[1], eps0[0], eps0[1]};
    p.relative_tail = 2;
    p.names = {"y1", "y2", "z1", "z2"};
    return p;
}

struct pair_solution {
    trajectory full;
    trajectory gamma;
    trajectory eps;
};

inline pair_solution solve_pair(const ivp &pair_problem)
{
    if (pair_problem.dim != 4) {
        throw error("solve_pair expects the four-component difference system", error_class::usage);
    }
    auto full = solve(pair_problem);
    auto gamma = full.slice(0, 2);
    auto eps = full.slice(2, 2);
    return {std::move(full), std::move(gamma), std::move(eps)};
}

} // namespace pencil

#endif
