#ifndef PENCIL_CLI_REGISTRY_HPP
#define PENCIL_CLI_REGISTRY_HPP

#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include <pencil/cli/config.hpp>

namespace pencil::cli
{

// A checked fact about an entry's report. `pointer` is a JSON pointer into
// report.json; numbers compare with relative tolerance `rel_tol`.
// `basis` says where the expectation comes from: "stated" for facts asserted
// in the source literature, "derived" for closed forms and exact oracles.
struct expected_fact {
    std::string pointer;
    nlohmann::json value;
    std::string basis;
    double rel_tol = 0;
};

struct registry_entry {
    std::string name;
    std::string config_text;
    int expected_exit = 0;
    std::vector<expected_fact> facts;

    run_config config() const
    {
        return run_config::parse(config_text);
    }
};

namespace detail
{

inline constexpr std::string_view xi1_field = "field.x = 2*x^2\nfield.y = 2*(y - x)\nfield.z = z - 2*x\n";
inline constexpr std::string_view rotating_system = "system.f1 = (1/10*y1 - y2)/x^2\nsystem.f2 = (1/10*y2 + y1)/x^2\n";

inline std::string cat(std::initializer_list<std::string_view> parts)
{
    std::string s;
    for (auto p : parts) {
        s += p;
    }
    return s;
}

} // namespace detail

inline const std::vector<registry_entry> &example_registry()
{
    using nlohmann::json;
    using detail::cat;
    static const std::vector<registry_entry> entries{
        // Formal invariant curves through the Euler series.
        {"xi1",
         cat({"command = invariance\ndescription = invariant curve (x, E(x), E(2x))\n", detail::xi1_field,
              "curve = t, E(t), E(2*t)\norder = 30\n"}),
         0,
         {{"/result/invariant", true, "stated"}, {"/result/multiplier/text", "2*t^2", "derived"}}},
        {"xi1-perturbed",
         cat({"command = invariance\ndescription = perturbed curve is not invariant\n", detail::xi1_field,
              "curve = t, E(t) + t^5, E(2*t)\norder = 30\n"}),
         1,
         {{"/result/invariant", false, "derived"}}},
        {"xi2",
         "command = invariance\ndescription = invariant curve (x, E(x), E(-x))\nfield.x = x^2\nfield.y = y - x\n"
         "field.z = -(z + x)\ncurve = t, E(t), E(-t)\norder = 30\n",
         0,
         {{"/result/invariant", true, "stated"}, {"/result/multiplier/text", "t^2", "derived"}}},
        {"xi3",
         "command = invariance\ndescription = invariant curve (x, E(x), E(x + x^2))\nfield.x = x^2\n"
         "field.y = y - x\nfield.z = (1 + 2*x)/(1 + x)^2*z - x*(1 + 2*x)/(1 + x)\ncurve = t, E(t), E(t + t^2)\n"
         "order = 30\n",
         0,
         {{"/result/invariant", true, "stated"}, {"/result/multiplier/text", "t^2", "derived"}}},
        {"xi4",
         "command = invariance\ndescription = invariant curve (x, E(x), x exp(E(x)))\nfield.x = x^2\n"
         "field.y = y - x\nfield.z = y*z\ncurve = t, E(t), t*exp(E(t))\norder = 30\n",
         0,
         {{"/result/invariant", true, "stated"}, {"/result/multiplier/text", "t^2", "derived"}}},
        {"xi4-mu2",
         "command = invariance\ndescription = invariant curve (x, E(x), 2x exp(E(x)))\nfield.x = x^2\n"
         "field.y = y - x\nfield.z = y*z\ncurve = t, E(t), 2*t*exp(E(t))\norder = 30\n",
         0,
         {{"/result/invariant", true, "stated"}}},
        {"pencil-axis",
         "command = invariance\ndescription = axis of the integral pencil z = A x exp(y/x)\nfield.x = x^3\n"
         "field.y = x*(y - x)\nfield.z = z*(y - x)*(1 - x)\ncurve = t, E(t), t*exp(E(t)/t)\nmode = float\n"
         "precision = 256\norder = 20\ntolerance = 1e-30\n",
         0,
         {{"/result/invariant", true, "stated"}}},

        // Iterated tangents.
        {"tangents-cubic",
         "command = tangents\ndescription = iterated tangents of the twisted cubic\ncurve = t, t^2, t^3\nsteps = 3\n",
         0,
         {{"/steps/0/direction", json::array({"1", "0", "0"}), "derived"},
          {"/steps/1/direction", json::array({"1", "1", "0"}), "derived"},
          {"/steps/2/direction", json::array({"1", "0", "1"}), "derived"}}},
        {"tangents-line",
         "command = tangents\ndescription = a line has a constant tangent sequence\ncurve = t, 2*t, 3*t\nsteps = 3\n",
         0,
         {{"/steps/0/direction", json::array({"1", "2", "3"}), "derived"},
          {"/steps/1/direction", json::array({"1", "0", "0"}), "derived"},
          {"/steps/2/direction", json::array({"1", "0", "0"}), "derived"}}},
        {"tangents-xi1",
         "command = tangents\ndescription = tangents of (x, E(x), E(2x))\ncurve = t, E(t), E(2*t)\nsteps = 2\n",
         0,
         {{"/steps/0/direction", json::array({"1", "1", "2"}), "derived"},
          {"/steps/1/direction", json::array({"1", "1", "4"}), "derived"}}},

        // q-short polynomials.
        {"qshort-x", "command = qshort\ndescription = P = x\npoly = x\nq = 1\n", 0,
         {{"/result/short", true, "stated"}, {"/result/positive", true, "stated"}}},
        {"qshort-2x", "command = qshort\ndescription = P = 2x\npoly = 2*x\nq = 1\n", 0,
         {{"/result/short", true, "stated"}, {"/result/positive", true, "stated"}}},
        {"qshort-minus-x", "command = qshort\ndescription = P = -x\npoly = -x\nq = 1\n", 1,
         {{"/result/short", true, "stated"}, {"/result/positive", false, "stated"}}},
        {"qshort-x-plus-x2", "command = qshort\ndescription = P = x + x^2\npoly = x + x^2\nq = 1\n", 1,
         {{"/result/short", false, "stated"}}},

        // Polynomial relations along jets.
        {"relations-parabola",
         "command = relations\ndescription = the parabola satisfies y1 = x^2\ncurve = x, x^2\ndegree = 2\n"
         "jet_order = 12\n",
         0,
         {{"/result/kernel_dimension", 1, "derived"}, {"/result/relations/0/text", "y1 - x^2", "derived"}}},
        {"relations-xi1",
         "command = relations\ndescription = no relation of degree 3 along (x, E(x), E(2x))\n"
         "curve = x, E(x), E(2*x)\ndegree = 3\n",
         0,
         {{"/result/kernel_dimension", 0, "derived"}, {"/result/transcendence_evidence", true, "derived"}}},
        {"relations-euler",
         "command = relations\ndescription = no relation of degree 4 along (x, E(x))\ncurve = x, E(x)\ndegree = 4\n"
         "jet_order = 60\n",
         0,
         {{"/result/kernel_dimension", 0, "derived"}, {"/result/transcendence_evidence", true, "derived"}}},
        {"relations-xi2",
         "command = relations\ndescription = relation search along (x, E(x), E(-x)), descriptive\n"
         "curve = x, E(x), E(-x)\ndegree = 3\n",
         0,
         {}},
        {"relations-xi3",
         "command = relations\ndescription = relation search along (x, E(x), E(x + x^2)), descriptive\n"
         "curve = x, E(x), E(x + x^2)\ndegree = 3\n",
         0,
         {}},
        {"sat-xi1",
         "command = relations\ndescription = test curve (x, T_1E(x), T_1E(2x))\nsat.H = E(x)\nsat.P = x; 2*x\n"
         "sat.k = 1\nq = 1\ndegree = 2\n",
         0,
         {{"/sat_warnings", json::array(), "derived"}, {"/result/transcendence_evidence", true, "derived"}}},
        {"sat-xi2",
         "command = relations\ndescription = test curve with P = -x\nsat.H = E(x)\nsat.P = x; -x\nsat.k = 0\nq = 1\n"
         "degree = 2\n",
         0,
         {{"/sat_warnings", json::array({"P_2 is not positive"}), "stated"}}},

        // Numerical pairs.
        {"euler-pair",
         cat({"command = classify-pair\ndescription = two solutions with flat contact\n", detail::xi1_field,
              "x_start = 0.5\nx_end = 0.02\ny0 = 0.75, 1.5\neps0 = 0.1, 0\nprobes = 0.1, 0.05, 0.02\n"
              "census = z1; z2; y1 - x\n"}),
         0,
         {{"/result/verdict", "HardyCandidate", "derived"},
          {"/result/contact/probes/0/k_hat", 4.474355, "derived", 1e-3},
          {"/result/contact/probes/1/k_hat", 6.777169, "derived", 1e-3},
          {"/result/contact/probes/2/k_hat", 12.858, "derived", 1e-3},
          {"/result/contact/flat_evidence", true, "derived"},
          {"/result/census/0/sign_changes", 0, "derived"}}},
        {"euler-coincident",
         cat({"command = classify-pair\ndescription = identical solutions\n", detail::xi1_field,
              "x_start = 0.5\nx_end = 0.02\ny0 = 0.75, 1.5\neps0 = 0, 0\nprobes = 0.1, 0.05, 0.02\n"}),
         0,
         {{"/result/exact_coincidence", true, "derived"}}},
        {"rotating",
         cat({"command = classify-pair\ndescription = spiralling gap, a = 1/10, b = 1\n", detail::rotating_system,
              "x_start = 1\nx_end = 0.01\ny0 = 0, 0\neps0 = 1, 1\nprobes = 0.1, 0.05, 0.02\ncensus = z1\n"}),
         0,
         {{"/result/verdict", "Interlaced", "derived"},
          {"/result/total_angle", -99.0, "derived", 1e-3},
          {"/result/census/0/sign_changes", 31, "derived"}}},
        {"rotating-radial",
         "command = classify-pair\ndescription = radial gap, a = 1/10, b = 0\nsystem.f1 = 1/10*y1/x^2\n"
         "system.f2 = 1/10*y2/x^2\nx_start = 1\nx_end = 0.01\ny0 = 0, 0\neps0 = 1, 1\nprobes = 0.1, 0.05, 0.02\n"
         "census = z1\n",
         0,
         {{"/result/verdict", "HardyCandidate", "derived"}, {"/result/census/0/sign_changes", 0, "derived"}}},

        // Trajectories.
        {"euler-jets",
         "command = integrate\ndescription = Euler solution against its jets J_8E\nsystem.f1 = (y1 - x)/x^2\n"
         "system.f2 = 0\nx_start = 0.2\nx_end = 0.02\ny0 = 0.28096, 0\nrtol = 1e-13\natol = 1e-20\n"
         "theta = E(t), 0\njet = 8\nprobes = 0.1, 0.05, 0.02\n",
         1,
         {{"/asymptotics/probes/0/empirical_order", 3.87515, "derived", 1e-3},
          {"/asymptotics/probes/1/empirical_order", 5.21517, "derived", 1e-3},
          {"/asymptotics/probes/2/empirical_order", 6.23704, "derived", 1e-3}}},
        {"log-field",
         "command = integrate\ndescription = field x^2 d/dx + y^2 x d/dy + z d/dz in the x-chart\nfield.x = x^2\n"
         "field.y = y^2*x\nfield.z = z\nx_start = 0.5\nx_end = 0.01\ny0 = 1.4426950408889634, 0.1353352832366127\n"
         "probes = 0.1, 0.01\n",
         0,
         {{"/probes/0/y/0", 0.43429448190325176, "derived", 1e-6},
          {"/probes/1/y/0", 0.21714724095162588, "derived", 1e-6}}},
    };
    return entries;
}

inline const registry_entry *find_example(std::string_view name)
{
    for (const auto &e : example_registry()) {
        if (e.name == name) {
            return &e;
        }
    }
    return nullptr;
}

} // namespace pencil::cli

#endif
