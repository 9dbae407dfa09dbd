#ifndef PENCIL_DICHOTOMY_HPP
#define PENCIL_DICHOTOMY_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include <pencil/error.hpp>
#include <pencil/expr.hpp>
#include <pencil/integrate.hpp>
#include <pencil/trajectory.hpp>

namespace pencil
{

struct contact_probe {
    double x;
    double norm;
    // log ||eps(x)|| / log x; +inf where eps vanishes.
    double k_hat;
};

struct contact_result {
    std::vector<contact_probe> probes;
    double bound = 10;
    // k_hat strictly increasing as x decreases and above `bound` at the
    // smallest probe.
    bool flat_evidence = false;
    // eps vanished at every probe: the two solutions coincide.
    bool coincidence = false;
};

inline contact_result contact_order(const trajectory &eps, std::vector<double> probes, double bound = 10)
{
    std::sort(probes.begin(), probes.end(), std::greater<>());
    contact_result r;
    r.bound = bound;
    std::size_t zeros = 0;
    for (double x : probes) {
        if (!(x > 0 && x < 1)) {
            throw domain_error("contact probes must lie in (0, 1), got " + std::to_string(x));
        }
        const auto v = eps.value(x);
        double n2 = 0;
        for (double a : v) {
            n2 += a * a;
        }
        const double n = std::sqrt(n2);
        if (n == 0) {
            ++zeros;
        }
        r.probes.push_back({x, n, n == 0 ? INFINITY : std::log(n) / std::log(x)});
    }
    r.coincidence = !probes.empty() && zeros == probes.size();
    if (!r.probes.empty() && !r.coincidence) {
        bool increasing = true;
        for (std::size_t i = 1; i < r.probes.size(); ++i) {
            increasing = increasing && r.probes[i].k_hat > r.probes[i - 1].k_hat;
        }
        r.flat_evidence = increasing && r.probes.back().k_hat > bound;
    }
    return r;
}

struct theta_sample {
    double x;
    double theta;
};

struct winding_result {
    std::vector<theta_sample> samples;
    double total_angle = 0;
    double total_turns = 0;
};

namespace detail
{

inline double principal(double a)
{
    constexpr double pi = std::numbers::pi;
    a = std::fmod(a, 2 * pi);
    if (a > pi) {
        a -= 2 * pi;
    } else if (a <= -pi) {
        a += 2 * pi;
    }
    return a;
}

} // namespace detail

// Continuous angle of eps = (z1, z2) along the grid, refined through the
// dense output until consecutive increments stay below pi/2. With
// allow_zeros, samples where eps vanishes are skipped and the angle is
// continued across them by the principal increment; otherwise a vanishing
// sample raises zero_crossing.
inline winding_result winding(const trajectory &eps, bool allow_zeros = false)
{
    if (eps.dim() != 2) {
        throw error("winding needs a planar gap trajectory", error_class::usage);
    }
    constexpr double quarter = std::numbers::pi / 2;
    winding_result w;
    auto angle_at = [&](double x) -> std::optional<double> {
        const auto v = eps.value(x);
        if (v[0] == 0 && v[1] == 0) {
            if (!allow_zeros) {
                throw zero_crossing("eps vanishes at x = " + std::to_string(x), x);
            }
            return std::nullopt;
        }
        return std::atan2(v[1], v[0]);
    };
    std::optional<double> prev_raw;
    double prev_x = 0;
    auto push = [&](double x, double raw) {
        if (!prev_raw) {
            w.samples.push_back({x, raw});
        } else {
            w.samples.push_back({x, w.samples.back().theta + detail::principal(raw - *prev_raw)});
        }
        prev_raw = raw;
        prev_x = x;
    };
    // Appends samples on (a, b], bisecting while the increment is large.
    auto refine = [&](auto &&self, double a, double raw_a, double b, double raw_b, int depth) -> void {
        if (std::fabs(detail::principal(raw_b - raw_a)) < quarter || depth > 60) {
            push(b, raw_b);
            return;
        }
        const double m = 0.5 * (a + b);
        const auto raw_m = angle_at(m);
        if (!raw_m) {
            push(b, raw_b);
            return;
        }
        self(self, a, raw_a, m, *raw_m, depth + 1);
        self(self, m, *raw_m, b, raw_b, depth + 1);
    };
    for (std::size_t i = 0; i < eps.size(); ++i) {
        const double x = eps.grid()[i];
        const auto raw = angle_at(x);
        if (!raw) {
            continue;
        }
        if (!prev_raw) {
            push(x, *raw);
        } else {
            refine(refine, prev_x, *prev_raw, x, *raw, 0);
        }
    }
    if (!w.samples.empty()) {
        w.total_angle = w.samples.back().theta - w.samples.front().theta;
        w.total_turns = w.total_angle / (2 * std::numbers::pi);
    }
    return w;
}

struct census_entry {
    std::string expression;
    std::size_t sign_changes = 0;
    // Changes located at x <= decade_factor * x_end.
    std::size_t final_decade_changes = 0;
    // Sign at the smallest sampled x (0 if the expression vanished there).
    int final_sign = 0;
    std::vector<double> crossings;
    // Slope of log|f| against log x over the final decade when f keeps one
    // sign there: an empirical lower-bound exponent.
    std::optional<double> slope;
};

namespace detail
{

inline point pair_point(const trajectory &full, double x)
{
    const auto v = full.value(x);
    point p;
    p[var::x] = x;
    p[var::y1] = v[0];
    p[var::y2] = v[1];
    if (full.dim() >= 4) {
        p[var::z1] = v[2];
        p[var::z2] = v[3];
    }
    return p;
}

inline double eval_at(const expr &e, const trajectory &full, double x)
{
    try {
        return eval(e, pair_point(full, x));
    } catch (const evaluation_singularity &err) {
        throw evaluation_singularity(std::string(err.what()) + " at x = " + std::to_string(x), err.subexpression());
    }
}

inline int sign_of(double v)
{
    return (v > 0) - (v < 0);
}

} // namespace detail

// Sign-change census of expressions in (x, y1, y2, z1, z2) along the pair,
// restricted to the window [x_lo, x_hi]. Samples are the knots plus three
// interior points per knot interval; every change is localised by bisection
// to relative width 1e-6.
inline std::vector<census_entry> sign_census(const std::vector<expr> &exprs, const trajectory &full, double x_lo,
                                             double x_hi, double decade_factor = 10)
{
    if (x_lo > x_hi) {
        std::swap(x_lo, x_hi);
    }
    const double lo = std::max(x_lo, std::min(full.x_start(), full.x_end()));
    const double hi = std::min(x_hi, std::max(full.x_start(), full.x_end()));
    if (!(lo < hi)) {
        throw domain_error("census window does not meet the trajectory");
    }
    // Sample abscissae in decreasing order.
    std::vector<double> xs;
    std::vector<double> knots;
    for (double g : full.grid()) {
        if (g >= lo && g <= hi) {
            knots.push_back(g);
        }
    }
    knots.push_back(lo);
    knots.push_back(hi);
    std::sort(knots.begin(), knots.end(), std::greater<>());
    knots.erase(std::unique(knots.begin(), knots.end()), knots.end());
    for (std::size_t i = 0; i < knots.size(); ++i) {
        xs.push_back(knots[i]);
        if (i + 1 < knots.size()) {
            const double a = knots[i], b = knots[i + 1];
            for (int q = 1; q <= 3; ++q) {
                xs.push_back(a + (b - a) * q / 4.0);
            }
        }
    }
    const double decade_edge = decade_factor * lo;

    std::vector<census_entry> out;
    for (const auto &e : exprs) {
        census_entry c;
        c.expression = to_string(e);
        double last_x = 0;
        int last_sign = 0;
        for (double x : xs) {
            const int s = detail::sign_of(detail::eval_at(e, full, x));
            if (s == 0) {
                continue;
            }
            if (last_sign != 0 && s != last_sign) {
                double a = last_x, b = x;
                while (std::fabs(a - b) > 1e-6 * std::fabs(0.5 * (a + b))) {
                    const double m = 0.5 * (a + b);
                    const int sm = detail::sign_of(detail::eval_at(e, full, m));
                    if (sm == 0) {
                        a = b = m;
                        break;
                    }
                    (sm == last_sign ? a : b) = m;
                }
                const double cx = 0.5 * (a + b);
                c.crossings.push_back(cx);
                ++c.sign_changes;
                if (cx <= decade_edge) {
                    ++c.final_decade_changes;
                }
            }
            last_sign = s;
            last_x = x;
        }
        c.final_sign = detail::sign_of(detail::eval_at(e, full, xs.back()));
        if (c.final_decade_changes == 0 && decade_edge <= hi) {
            const double f0 = std::fabs(detail::eval_at(e, full, lo));
            const double f1 = std::fabs(detail::eval_at(e, full, decade_edge));
            if (f0 > 0 && f1 > 0) {
                c.slope = (std::log(f0) - std::log(f1)) / (std::log(lo) - std::log(decade_edge));
            }
        }
        out.push_back(std::move(c));
    }
    return out;
}

enum class verdict { interlaced, hardy_candidate, inconclusive };

inline const char *to_string(verdict v)
{
    switch (v) {
        case verdict::interlaced:
            return "Interlaced";
        case verdict::hardy_candidate:
            return "HardyCandidate";
        case verdict::inconclusive:
            return "Inconclusive";
    }
    return "?";
}

struct thresholds {
    double turn_threshold = 3;
    double bounded_turns = 0.5;
    // The final decade is [x_end, decade_factor * x_end].
    double decade_factor = 10;
    double contact_bound = 10;
};

struct pair_report {
    double x_start = 0;
    double x_end = 0;
    contact_result contact;
    winding_result winding;
    std::vector<census_entry> census;
    bool coincidence = false;
    // theta monotone over the final decade.
    bool theta_monotone = false;
    verdict result = verdict::inconclusive;
    thresholds used;
};

inline bool theta_monotone_near_end(const winding_result &w, double x_end, double factor)
{
    const double edge = factor * x_end;
    int dir = 0;
    const theta_sample *prev = nullptr;
    for (const auto &s : w.samples) {
        if (s.x > edge) {
            continue;
        }
        if (prev) {
            const int d = (s.theta > prev->theta) - (s.theta < prev->theta);
            if (d != 0) {
                if (dir != 0 && d != dir) {
                    return false;
                }
                dir = d;
            }
        }
        prev = &s;
    }
    return prev != nullptr;
}

// Heuristic evidence for the dichotomy; never a proof.
inline verdict classify(const pair_report &r, const thresholds &t)
{
    if (r.coincidence) {
        return verdict::inconclusive;
    }
    if (std::fabs(r.winding.total_turns) >= t.turn_threshold && r.theta_monotone) {
        return verdict::interlaced;
    }
    const bool quiet = std::all_of(r.census.begin(), r.census.end(),
                                   [](const census_entry &c) { return c.final_decade_changes == 0; });
    if (std::fabs(r.winding.total_turns) < t.bounded_turns && quiet) {
        return verdict::hardy_candidate;
    }
    return verdict::inconclusive;
}

inline pair_report analyze_pair(const pair_solution &sol, const std::vector<expr> &census_exprs,
                                const std::vector<double> &probes, const thresholds &t = {})
{
    pair_report r;
    r.used = t;
    r.x_start = sol.full.x_start();
    r.x_end = sol.full.x_end();
    r.contact = contact_order(sol.eps, probes, t.contact_bound);
    bool all_zero = true;
    for (std::size_t i = 0; i < sol.eps.size() && all_zero; ++i) {
        const auto v = sol.eps.value_at_knot(i);
        all_zero = v[0] == 0 && v[1] == 0;
    }
    r.coincidence = all_zero;
    if (!r.coincidence) {
        r.winding = winding(sol.eps, true);
        r.theta_monotone = theta_monotone_near_end(r.winding, std::min(r.x_start, r.x_end), t.decade_factor);
    }
    r.census = sign_census(census_exprs, sol.full, std::min(r.x_start, r.x_end), std::max(r.x_start, r.x_end),
                           t.decade_factor);
    r.result = classify(r, t);
    return r;
}

} // namespace pencil

#endif
