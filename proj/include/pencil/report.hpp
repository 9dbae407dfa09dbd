#ifndef PENCIL_REPORT_HPP
#define PENCIL_REPORT_HPP

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include <pencil/coefficient.hpp>
#include <pencil/curve.hpp>
#include <pencil/dichotomy.hpp>
#include <pencil/error.hpp>
#include <pencil/field.hpp>
#include <pencil/sat.hpp>
#include <pencil/series.hpp>

namespace pencil
{

using json = nlohmann::json;

// Doubles go into reports rounded to 12 significant digits so that results
// do not depend on the last bits of libm.
inline double report_double(double v)
{
    if (!std::isfinite(v) || v == 0) {
        return v;
    }
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return std::strtod(buf, nullptr);
}

inline json finite_or_null(double v)
{
    return std::isfinite(v) ? json(report_double(v)) : json(nullptr);
}

template <coefficient R>
json to_json(const truncated_series<R> &s)
{
    json coeffs = json::array();
    for (const auto &a : s.coeffs()) {
        coeffs.push_back(coefficient_traits<R>::to_string(a));
    }
    return {{"mode", mode_name(coefficient_traits<R>::mode)},
            {"order", s.order()},
            {"var", s.var_name()},
            {"coeffs", coeffs},
            {"text", to_string(s)}};
}

template <coefficient R>
truncated_series<R> series_from_json(const json &j)
{
    const auto mode = j.at("mode").get<std::string>();
    if (mode != mode_name(coefficient_traits<R>::mode)) {
        throw mode_mismatch("series stored in mode '" + mode + "', expected '"
                            + mode_name(coefficient_traits<R>::mode) + "'");
    }
    std::vector<R> c;
    for (const auto &a : j.at("coeffs")) {
        c.push_back(coefficient_traits<R>::parse(a.get<std::string>()));
    }
    if (c.size() != j.at("order").get<std::size_t>() + 1) {
        throw error("series order does not match its coefficient count", error_class::usage);
    }
    return truncated_series<R>(std::move(c), j.value("var", std::string("x")));
}

template <coefficient R>
json to_json(const formal_curve<R> &c)
{
    json comps = json::array();
    for (const auto &s : c.components()) {
        comps.push_back(to_json(s));
    }
    return {{"branch", to_string(c.branch())}, {"components", comps}};
}

template <coefficient R>
json to_json(const invariance_report<R> &r)
{
    json res = json::array();
    for (const auto &s : r.residual) {
        res.push_back(to_json(s));
    }
    json j{{"invariant", r.invariant},
           {"checked_order", r.checked_order},
           {"pivot", r.pivot},
           {"pivot_valuation", r.pivot_valuation},
           {"residual", res},
           {"max_abs_residual", r.max_abs_residual},
           {"max_rel_residual", r.max_rel_residual}};
    j["multiplier"] = r.multiplier ? to_json(*r.multiplier) : json(nullptr);
    if (!is_exact_v<R>) {
        j["tolerance"] = r.tolerance;
    }
    return j;
}

template <coefficient R>
json to_json(const std::vector<tangent_step<R>> &steps)
{
    json out = json::array();
    for (const auto &s : steps) {
        json dir = json::array(), unit = json::array();
        for (const auto &a : s.direction) {
            dir.push_back(coefficient_traits<R>::to_string(a));
        }
        for (double u : s.unit()) {
            unit.push_back(report_double(u));
        }
        out.push_back({{"direction", dir},
                       {"unit", unit},
                       {"norm", report_double(s.norm)},
                       {"chart_index", s.chart_index},
                       {"pivot_valuation", s.pivot_valuation},
                       {"transformed", to_json(s.transformed)}});
    }
    return out;
}

inline json to_json(const q_short_result &q)
{
    return {{"short", q.is_short}, {"positive", q.is_positive}, {"val", q.val}, {"deg", q.deg}};
}

inline std::string exponent_key(const monomial_exponents &e)
{
    std::string s;
    for (std::size_t i = 0; i < e.size(); ++i) {
        s += (i ? "," : "") + std::to_string(e[i]);
    }
    return s;
}

inline json to_json(const relation_basis &rb)
{
    json vars = json::array();
    for (std::size_t i = 0; i < rb.variables; ++i) {
        vars.push_back(variable_label(i));
    }
    json rels = json::array();
    for (std::size_t r = 0; r < rb.basis.size(); ++r) {
        json coeffs = json::object();
        for (std::size_t i = 0; i < rb.monomials.size(); ++i) {
            if (rb.basis[r][i] != 0) {
                coeffs[exponent_key(rb.monomials[i])] = rb.basis[r][i].str();
            }
        }
        rels.push_back({{"text", rb.relation_text(r)}, {"coefficients", coeffs}});
    }
    return {{"max_degree", rb.max_degree},
            {"jet_order", rb.jet_order},
            {"variables", vars},
            {"monomial_count", rb.monomial_count()},
            {"kernel_dimension", rb.basis.size()},
            {"relations", rels},
            {"evidence_margin", rb.evidence_margin},
            {"transcendence_evidence", rb.transcendence_evidence},
            {"verified", rb.verified},
            {"warnings", rb.warnings}};
}

inline json to_json(const thresholds &t)
{
    return {{"turn_threshold", t.turn_threshold},
            {"bounded_turns", t.bounded_turns},
            {"decade_factor", t.decade_factor},
            {"contact_bound", t.contact_bound}};
}

inline json to_json(const pair_report &r, std::size_t max_theta_samples = 400)
{
    json probes = json::array();
    for (const auto &p : r.contact.probes) {
        probes.push_back({{"x", p.x}, {"norm", finite_or_null(p.norm)}, {"k_hat", finite_or_null(p.k_hat)}});
    }
    json theta = json::array();
    const auto &s = r.winding.samples;
    if (!s.empty()) {
        const std::size_t stride = std::max<std::size_t>(1, (s.size() + max_theta_samples - 1) / max_theta_samples);
        for (std::size_t i = 0; i < s.size(); i += stride) {
            theta.push_back({report_double(s[i].x), report_double(s[i].theta)});
        }
        if ((s.size() - 1) % stride != 0) {
            theta.push_back({report_double(s.back().x), report_double(s.back().theta)});
        }
    }
    json census = json::array();
    for (const auto &c : r.census) {
        json crossings = json::array();
        for (double x : c.crossings) {
            crossings.push_back(report_double(x));
        }
        census.push_back({{"expression", c.expression},
                          {"sign_changes", c.sign_changes},
                          {"final_decade_changes", c.final_decade_changes},
                          {"final_sign", c.final_sign},
                          {"crossings", crossings},
                          {"slope", c.slope ? finite_or_null(*c.slope) : json(nullptr)}});
    }
    return {{"x_start", r.x_start},
            {"x_end", r.x_end},
            {"contact", {{"probes", probes}, {"bound", r.contact.bound}, {"flat_evidence", r.contact.flat_evidence}}},
            {"theta", theta},
            {"total_angle", report_double(r.winding.total_angle)},
            {"total_turns", report_double(r.winding.total_turns)},
            {"theta_monotone_final_decade", r.theta_monotone},
            {"census", census},
            {"exact_coincidence", r.coincidence},
            {"verdict", to_string(r.result)},
            {"evidence_only", true},
            {"thresholds", to_json(r.used)}};
}

// ---------------------------------------------------------------------------
// Self-contained SVG line plots.

struct plot_series {
    std::vector<double> xs;
    std::vector<double> ys;
    std::string color = "#1f77b4";
    bool dashed = false;
};

namespace detail
{

inline std::string fmt(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

inline std::string xml_escape(const std::string &s)
{
    std::string o;
    for (char c : s) {
        switch (c) {
            case '<':
                o += "&lt;";
                break;
            case '>':
                o += "&gt;";
                break;
            case '&':
                o += "&amp;";
                break;
            default:
                o += c;
        }
    }
    return o;
}

} // namespace detail

inline void write_svg_plot(std::ostream &os, const std::vector<plot_series> &series, const std::string &title,
                           const std::string &xlabel, const std::string &ylabel)
{
    const double W = 640, H = 420, L = 70, R = 20, T = 40, B = 50;
    double x0 = INFINITY, x1 = -INFINITY, y0 = INFINITY, y1 = -INFINITY;
    for (const auto &s : series) {
        for (std::size_t i = 0; i < s.xs.size(); ++i) {
            if (!std::isfinite(s.xs[i]) || !std::isfinite(s.ys[i])) {
                continue;
            }
            x0 = std::min(x0, s.xs[i]);
            x1 = std::max(x1, s.xs[i]);
            y0 = std::min(y0, s.ys[i]);
            y1 = std::max(y1, s.ys[i]);
        }
    }
    if (!(x0 < x1)) {
        x0 = std::isfinite(x0) ? x0 - 1 : 0;
        x1 = x0 + 2;
    }
    if (!(y0 < y1)) {
        y0 = std::isfinite(y0) ? y0 - 1 : 0;
        y1 = y0 + 2;
    }
    auto px = [&](double x) { return L + (x - x0) / (x1 - x0) * (W - L - R); };
    auto py = [&](double y) { return H - B - (y - y0) / (y1 - y0) * (H - T - B); };
    using detail::fmt;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\" viewBox=\"0 0 " << W
       << ' ' << H << "\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    os << "<text x=\"" << W / 2 << "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"15\">"
       << detail::xml_escape(title) << "</text>\n";
    os << "<rect x=\"" << L << "\" y=\"" << T << "\" width=\"" << W - L - R << "\" height=\"" << H - T - B
       << "\" fill=\"none\" stroke=\"black\"/>\n";
    for (int i = 0; i <= 4; ++i) {
        const double xv = x0 + (x1 - x0) * i / 4, yv = y0 + (y1 - y0) * i / 4;
        os << "<text x=\"" << fmt(px(xv)) << "\" y=\"" << H - B + 16
           << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" << fmt(xv) << "</text>\n";
        os << "<text x=\"" << L - 6 << "\" y=\"" << fmt(py(yv) + 4)
           << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" << fmt(yv) << "</text>\n";
    }
    os << "<text x=\"" << W / 2 << "\" y=\"" << H - 10
       << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">" << detail::xml_escape(xlabel)
       << "</text>\n";
    os << "<text x=\"16\" y=\"" << H / 2 << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\""
       << " transform=\"rotate(-90 16 " << H / 2 << ")\">" << detail::xml_escape(ylabel) << "</text>\n";
    for (const auto &s : series) {
        os << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.5\"";
        if (s.dashed) {
            os << " stroke-dasharray=\"5,4\"";
        }
        os << " points=\"";
        bool first = true;
        for (std::size_t i = 0; i < s.xs.size(); ++i) {
            if (!std::isfinite(s.xs[i]) || !std::isfinite(s.ys[i])) {
                continue;
            }
            os << (first ? "" : " ") << fmt(px(s.xs[i])) << ',' << fmt(py(std::clamp(s.ys[i], y0, y1)));
            first = false;
        }
        os << "\"/>\n";
    }
    os << "</svg>\n";
}

// theta against log(1/x).
inline void write_theta_svg(std::ostream &os, const pair_report &r)
{
    plot_series s;
    for (const auto &t : r.winding.samples) {
        s.xs.push_back(-std::log(t.x));
        s.ys.push_back(t.theta);
    }
    write_svg_plot(os, {s}, "unwrapped angle of eps", "log(1/x)", "theta");
}

// log ||eps|| against log x with lines of slope k_hat through each probe.
inline void write_contact_svg(std::ostream &os, const trajectory &eps, const pair_report &r)
{
    plot_series s;
    for (std::size_t i = 0; i < eps.size(); ++i) {
        const auto v = eps.value_at_knot(i);
        const double n = std::hypot(v[0], v[1]);
        if (n > 0) {
            s.xs.push_back(std::log(eps.grid()[i]));
            s.ys.push_back(std::log(n));
        }
    }
    std::vector<plot_series> all{s};
    const char *colors[] = {"#d62728", "#2ca02c", "#9467bd", "#ff7f0e"};
    std::size_t c = 0;
    const double lx0 = std::log(std::min(r.x_start, r.x_end)), lx1 = std::log(std::max(r.x_start, r.x_end));
    for (const auto &p : r.contact.probes) {
        if (!std::isfinite(p.k_hat)) {
            continue;
        }
        plot_series line;
        line.xs = {lx0, lx1};
        line.ys = {p.k_hat * lx0, p.k_hat * lx1};
        line.color = colors[c++ % 4];
        line.dashed = true;
        all.push_back(line);
    }
    write_svg_plot(os, all, "contact of the pair", "log x", "log ||eps||");
}

} // namespace pencil

#endif
