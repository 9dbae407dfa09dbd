#ifndef PENCIL_CLI_COMMANDS_HPP
#define PENCIL_CLI_COMMANDS_HPP

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <future>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include <pencil/cli/config.hpp>
#include <pencil/cli/registry.hpp>
#include <pencil/curve.hpp>
#include <pencil/dichotomy.hpp>
#include <pencil/field.hpp>
#include <pencil/integrate.hpp>
#include <pencil/rational_function.hpp>
#include <pencil/report.hpp>
#include <pencil/sat.hpp>
#include <pencil/series.hpp>

namespace pencil::cli
{

namespace exit_code
{
inline constexpr int success = 0;
inline constexpr int negative = 1;
inline constexpr int usage = 2;
inline constexpr int numeric = 3;
} // namespace exit_code

struct command_result {
    int exit_code = exit_code::success;
    json report;
};

// Settings of a named example overlaid with the explicit ones.
inline run_config resolve_config(const run_config &cfg)
{
    const auto name = cfg.get("example");
    if (!name) {
        return cfg;
    }
    const auto *entry = find_example(*name);
    if (!entry) {
        throw unknown_identifier("no example named '" + *name + "'");
    }
    run_config merged = entry->config();
    for (const auto &[k, v] : cfg.values()) {
        merged.set(k, v);
    }
    return merged;
}

namespace detail
{

inline void write_text(const std::filesystem::path &path, const std::string &text)
{
    std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw error("cannot write '" + path.string() + "'", error_class::usage);
    }
    out << text;
}

inline void write_json(const std::filesystem::path &path, const json &j)
{
    write_text(path, j.dump(2) + "\n");
}

inline vector_field3 field_from(const run_config &c)
{
    return vector_field3::parse(c.text("example", "inline"), c.require("field.x"), c.require("field.y"),
                                c.require("field.z"));
}

inline reduced_system system_from(const run_config &c)
{
    if (c.has("system.f1") || c.has("system.f2")) {
        return reduced_system::parse(c.require("system.f1"), c.require("system.f2"));
    }
    if (c.has("field.x")) {
        return chart_reduce(field_from(c));
    }
    throw config_error("a system needs system.f1/system.f2 or field.x/field.y/field.z");
}

inline half_branch branch_from(const run_config &c)
{
    return c.text("branch", "+") == "-" ? half_branch::negative : half_branch::positive;
}

inline std::size_t size_from(const run_config &c, const std::string &key, long long fallback)
{
    return static_cast<std::size_t>(c.integer(key, fallback));
}

inline std::array<double, 2> pair_from(const run_config &c, const std::string &key, std::array<double, 2> fallback)
{
    const auto v = c.reals(key, {fallback[0], fallback[1]});
    if (v.size() != 2) {
        throw config_error("'" + key + "' needs two values");
    }
    return {v[0], v[1]};
}

inline log_substitution log_mode_from(const run_config &c)
{
    const auto m = c.text("log_substitution", "auto");
    return m == "on" ? log_substitution::on : m == "off" ? log_substitution::off : log_substitution::automatic;
}

inline void apply_tolerances(const run_config &c, ivp &p)
{
    p.rtol = c.real("rtol", 1e-10);
    p.atol = c.real("atol", 1e-12);
    p.max_steps = size_from(c, "max_steps", 1000000);
    p.substitution = log_mode_from(c);
}

// Polynomial in x given as an expression.
inline rational_polynomial polynomial_from(const std::string &text)
{
    const auto e = parse_expr(text, parse_options{{var::x}, false});
    const auto rf = to_rational_function(e).normalized();
    if (!rf.den.is_constant()) {
        throw error("'" + text + "' is not a polynomial", error_class::usage);
    }
    std::vector<rational> c;
    for (const auto &[exps, coef] : rf.num.terms()) {
        const auto d = exps[static_cast<std::size_t>(var::x)];
        if (c.size() <= d) {
            c.resize(d + 1, rational(0));
        }
        c[d] += coef / rf.den.constant_value();
    }
    return rational_polynomial(std::move(c));
}

inline json config_json(const run_config &c)
{
    json j = json::object();
    for (const auto &[k, v] : c.values()) {
        j[k] = v;
    }
    return j;
}

} // namespace detail

inline command_result cmd_invariance(const run_config &c, const std::filesystem::path &)
{
    const auto xi = detail::field_from(c);
    const auto N = detail::size_from(c, "order", 30);
    const auto curve_text = c.require("curve");
    command_result out;
    out.report = {{"command", "invariance"},
                  {"field", {to_string(xi[0]), to_string(xi[1]), to_string(xi[2])}},
                  {"curve", curve_text},
                  {"order", N}};
    if (c.text("mode", "exact") == "float") {
        const auto bits = static_cast<unsigned>(c.integer("precision", default_float_bits));
        precision_scope scope(bits);
        const auto curve = parse_curve<big_float>(curve_text, N + 1, detail::branch_from(c));
        const auto rep = invariance_check(xi, curve, N, c.real("tolerance", 1e-30));
        out.report["mode"] = "big-float";
        out.report["precision"] = bits;
        out.report["result"] = to_json(rep);
        out.exit_code = rep.invariant ? exit_code::success : exit_code::negative;
    } else {
        const auto curve = parse_curve<rational>(curve_text, N + 1, detail::branch_from(c));
        const auto rep = invariance_check(xi, curve, N);
        out.report["mode"] = "exact-rational";
        out.report["result"] = to_json(rep);
        out.exit_code = rep.invariant ? exit_code::success : exit_code::negative;
    }
    return out;
}

inline command_result cmd_tangents(const run_config &c, const std::filesystem::path &)
{
    const auto steps = detail::size_from(c, "steps", 3);
    const auto order = detail::size_from(c, "order", static_cast<long long>(2 * steps + 2));
    const auto curve_text = c.require("curve");
    command_result out;
    out.report = {{"command", "tangents"}, {"curve", curve_text}, {"steps_requested", steps}, {"order", order}};
    if (c.text("mode", "exact") == "float") {
        precision_scope scope(static_cast<unsigned>(c.integer("precision", default_float_bits)));
        const auto curve = parse_curve<big_float>(curve_text, order, detail::branch_from(c));
        out.report["steps"] = to_json(iterated_tangents(curve, steps));
    } else {
        const auto curve = parse_curve<rational>(curve_text, order, detail::branch_from(c));
        out.report["steps"] = to_json(iterated_tangents(curve, steps));
    }
    return out;
}

inline command_result cmd_qshort(const run_config &c, const std::filesystem::path &)
{
    const auto text = c.require("poly");
    const auto q = detail::size_from(c, "q", 1);
    const auto r = q_short_check(detail::polynomial_from(text), q);
    command_result out;
    out.report = {{"command", "qshort"}, {"poly", text}, {"q", q}, {"result", to_json(r)}};
    out.exit_code = r.is_short && r.is_positive ? exit_code::success : exit_code::negative;
    return out;
}

inline command_result cmd_relations(const run_config &c, const std::filesystem::path &)
{
    if (c.text("mode", "exact") == "float") {
        throw exactness_required("relation search runs in exact-rational mode only");
    }
    const auto d = detail::size_from(c, "degree", 3);
    command_result out;
    out.report = {{"command", "relations"}, {"degree", d}};

    const bool sat = c.has("sat.H");
    std::size_t dim = 0;
    sat_curve_spec<rational> spec;
    if (sat) {
        spec.k = detail::size_from(c, "sat.k", 0);
        spec.q = detail::size_from(c, "q", 1);
        for (const auto &p : c.list("sat.P")) {
            spec.P.push_back(detail::polynomial_from(p));
        }
        if (spec.P.empty()) {
            throw config_error("sat.H needs sat.P");
        }
        dim = 1 + c.list("sat.H").size() * spec.P.size();
        out.report["sat"] = {{"H", c.list("sat.H")}, {"P", c.list("sat.P")}, {"k", spec.k}, {"q", spec.q}};
    } else {
        dim = parse_curve_exprs(c.require("curve")).size();
        out.report["curve"] = c.require("curve");
    }
    const auto M = monomials_up_to(dim, d).size();
    const auto N = detail::size_from(c, "jet_order", static_cast<long long>(2 * M));
    out.report["jet_order"] = N;

    formal_curve<rational> curve;
    if (sat) {
        // T_k costs k orders; composing with P costs none.
        for (const auto &h : c.list("sat.H")) {
            const auto hc = parse_curve<rational>("x, " + h, N + spec.k);
            spec.H.push_back(hc[1].with_var("x"));
        }
        auto built = build_sat_curve(spec);
        out.report["sat_warnings"] = built.warnings;
        curve = std::move(built.curve);
    } else {
        curve = parse_curve<rational>(c.require("curve"), N);
    }
    const auto rb = relation_search(curve, d, N);
    out.report["result"] = to_json(rb);
    out.exit_code = rb.verified ? exit_code::success : exit_code::numeric;
    return out;
}

inline command_result cmd_integrate(const run_config &c, const std::filesystem::path &dir)
{
    const auto sys = detail::system_from(c);
    ivp p = make_ivp(sys, c.real("x_start", 1), c.real("x_end", 0.01), detail::pair_from(c, "y0", {0, 0}));
    detail::apply_tolerances(c, p);
    const auto traj = solve(p);
    command_result out;
    json probes = json::array();
    for (double x : c.reals("probes")) {
        const auto y = traj.value(x);
        probes.push_back({{"x", x}, {"y", {report_double(y[0]), report_double(y[1])}}});
    }
    const auto last = traj.value_at_knot(traj.size() - 1);
    out.report = {{"command", "integrate"},
                  {"system", {{"f1", to_string(sys.f1)}, {"f2", to_string(sys.f2)}, {"provenance", sys.provenance}}},
                  {"x_start", p.x_start},
                  {"x_end", p.x_end},
                  {"final", {{"x", traj.x_end()}, {"y", {report_double(last[0]), report_double(last[1])}}}},
                  {"probes", probes},
                  {"steps", {{"accepted", traj.stats().accepted_steps}, {"rejected", traj.stats().rejected_steps}}},
                  {"log_substitution", traj.stats().log_substitution}};
    if (c.has("theta")) {
        const auto N = detail::size_from(c, "jet", 8);
        const auto nu = detail::size_from(c, "ramification", 1);
        const auto bits = static_cast<unsigned>(c.integer("precision", default_float_bits));
        puiseux_curve<rational> pc;
        pc.ramification = nu;
        const auto th = parse_curve<rational>(c.require("theta"), N);
        pc.theta = {th[0], th[1]};
        pc.branch = detail::branch_from(c);
        const auto dev = asymptotic_deviation(traj, pc, N, c.reals("probes"), bits);
        json rows = json::array();
        bool all_above = true;
        for (const auto &d : dev) {
            rows.push_back({{"x", d.x},
                            {"deviation", finite_or_null(d.deviation)},
                            {"empirical_order", finite_or_null(d.empirical_order)},
                            {"exceeds_jet_order", d.empirical_order > static_cast<double>(N)}});
            all_above = all_above && d.empirical_order > static_cast<double>(N);
        }
        out.report["asymptotics"] = {{"theta", c.require("theta")}, {"jet", N}, {"probes", rows}};
        out.exit_code = all_above ? exit_code::success : exit_code::negative;
    }
    if (!dir.empty()) {
        std::ostringstream csv;
        traj.write_csv(csv);
        detail::write_text(dir / "trajectory.csv", csv.str());
    }
    return out;
}

inline command_result cmd_classify_pair(const run_config &c, const std::filesystem::path &dir)
{
    const auto sys = detail::system_from(c);
    const auto ds = make_difference_system(sys);
    ivp p = make_pair_ivp(ds, c.real("x_start", 0.5), c.real("x_end", 0.02), detail::pair_from(c, "y0", {0, 0}),
                          detail::pair_from(c, "eps0", {0.1, 0}));
    detail::apply_tolerances(c, p);
    const auto sol = solve_pair(p);
    thresholds t;
    t.turn_threshold = c.real("turn_threshold", t.turn_threshold);
    t.bounded_turns = c.real("bounded_turns", t.bounded_turns);
    t.decade_factor = c.real("decade_factor", t.decade_factor);
    t.contact_bound = c.real("contact_bound", t.contact_bound);
    std::vector<expr> census;
    for (const auto &s : c.list("census")) {
        census.push_back(parse_expr(s, parse_options{pair_vars(), false}));
    }
    if (census.empty()) {
        census = {expr::variable(var::z1), expr::variable(var::z2)};
    }
    const auto rep = analyze_pair(sol, census, c.reals("probes", {0.1, 0.05, 0.02}), t);
    command_result out;
    out.report = {{"command", "classify-pair"},
                  {"system",
                   {{"f1", to_string(ds.f1)},
                    {"f2", to_string(ds.f2)},
                    {"f3", to_string(ds.f3)},
                    {"f4", to_string(ds.f4)},
                    {"provenance", ds.provenance}}},
                  {"steps", {{"accepted", sol.full.stats().accepted_steps}, {"rejected", sol.full.stats().rejected_steps}}},
                  {"result", to_json(rep)}};
    out.exit_code = rep.coincidence || rep.result != verdict::inconclusive ? exit_code::success : exit_code::negative;
    if (!dir.empty()) {
        std::ostringstream csv, theta, contact;
        sol.full.write_csv(csv);
        detail::write_text(dir / "trajectory.csv", csv.str());
        write_theta_svg(theta, rep);
        detail::write_text(dir / "theta.svg", theta.str());
        write_contact_svg(contact, sol.eps, rep);
        detail::write_text(dir / "contact.svg", contact.str());
    }
    return out;
}

// Runs one configured command; writes report.json (and plots or CSV where
// the command has them) into `dir` unless it is empty. Errors become exit
// codes 2 (usage) and 3 (numeric) with the message in the report.
inline command_result run_command(const run_config &raw, const std::filesystem::path &dir)
{
    command_result out;
    try {
        const run_config c = resolve_config(raw);
        const auto cmd = c.require("command");
        if (cmd == "invariance") {
            out = cmd_invariance(c, dir);
        } else if (cmd == "tangents") {
            out = cmd_tangents(c, dir);
        } else if (cmd == "qshort") {
            out = cmd_qshort(c, dir);
        } else if (cmd == "relations") {
            out = cmd_relations(c, dir);
        } else if (cmd == "integrate") {
            out = cmd_integrate(c, dir);
        } else {
            out = cmd_classify_pair(c, dir);
        }
        if (c.has("example")) {
            out.report["example"] = c.require("example");
        }
        out.report["config"] = detail::config_json(c);
    } catch (const error &e) {
        out.exit_code = e.classification() == error_class::usage ? exit_code::usage : exit_code::numeric;
        out.report = {{"error", e.what()}, {"class", e.classification() == error_class::usage ? "usage" : "numeric"}};
    } catch (const nlohmann::json::exception &e) {
        out.exit_code = exit_code::usage;
        out.report = {{"error", e.what()}, {"class", "usage"}};
    }
    out.report["exit_code"] = out.exit_code;
    if (!dir.empty()) {
        detail::write_json(dir / "report.json", out.report);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Registry suite.

struct fact_check {
    std::string pointer;
    json expected;
    json actual;
    std::string basis;
    bool ok = false;
};

inline bool fact_matches(const json &expected, const json &actual, double rel_tol)
{
    if (expected.is_number() && actual.is_number() && !expected.is_boolean()) {
        const double e = expected.get<double>(), a = actual.get<double>();
        if (rel_tol == 0) {
            return e == a;
        }
        return std::fabs(a - e) <= rel_tol * std::fabs(e);
    }
    return expected == actual;
}

inline std::vector<fact_check> check_facts(const registry_entry &e, const json &report)
{
    std::vector<fact_check> out;
    for (const auto &f : e.facts) {
        fact_check fc{f.pointer, f.value, nullptr, f.basis, false};
        const json::json_pointer ptr(f.pointer);
        if (report.contains(ptr)) {
            fc.actual = report.at(ptr);
            fc.ok = fact_matches(f.value, fc.actual, f.rel_tol);
        }
        out.push_back(std::move(fc));
    }
    return out;
}

struct registry_outcome {
    json summary;
    bool all_ok = true;
};

inline std::string utc_timestamp()
{
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

// Every entry runs in its own subdirectory. With `parallel`, entries run
// concurrently; the output does not depend on the schedule.
inline registry_outcome run_registry(const std::filesystem::path &dir, bool parallel = false)
{
    const auto &entries = example_registry();
    std::vector<command_result> results(entries.size());
    auto run_one = [&](std::size_t i) {
        results[i] = run_command(entries[i].config(), dir.empty() ? dir : dir / entries[i].name);
    };
    if (parallel) {
        std::vector<std::future<void>> jobs;
        for (std::size_t i = 0; i < entries.size(); ++i) {
            jobs.push_back(std::async(std::launch::async, run_one, i));
        }
        for (auto &j : jobs) {
            j.get();
        }
    } else {
        for (std::size_t i = 0; i < entries.size(); ++i) {
            run_one(i);
        }
    }
    registry_outcome out;
    json list = json::array();
    for (std::size_t i = 0; i < entries.size(); ++i) {
        const auto &e = entries[i];
        json facts = json::array();
        bool ok = results[i].exit_code == e.expected_exit;
        for (const auto &f : check_facts(e, results[i].report)) {
            facts.push_back(
                {{"pointer", f.pointer}, {"expected", f.expected}, {"actual", f.actual}, {"basis", f.basis}, {"ok", f.ok}});
            ok = ok && f.ok;
        }
        out.all_ok = out.all_ok && ok;
        list.push_back({{"name", e.name},
                        {"exit_code", results[i].exit_code},
                        {"expected_exit", e.expected_exit},
                        {"facts", facts},
                        {"ok", ok},
                        {"report", results[i].report}});
    }
    out.summary = {{"timestamp", utc_timestamp()}, {"entries", list}, {"all_ok", out.all_ok}};
    if (!dir.empty()) {
        detail::write_json(dir / "registry.json", out.summary);
    }
    return out;
}

} // namespace pencil::cli

#endif
