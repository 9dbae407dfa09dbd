#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <pencil/cli/commands.hpp>

namespace fs = std::filesystem;
using namespace pencil::cli;

namespace
{

struct command_options {
    std::string config_file;
    std::vector<std::string> sets;
    std::string out;
    bool quiet = false;
    std::map<std::string, std::string> keys;
};

std::string flag_name(std::string_view key)
{
    std::string s(key);
    for (auto &ch : s) {
        if (ch == '.' || ch == '_') {
            ch = '-';
        }
    }
    return "--" + s;
}

// Keys exposed as flags on each subcommand; everything else is reachable
// through --set or a config file.
const std::map<std::string, std::vector<std::string_view>> &command_keys()
{
    static const std::map<std::string, std::vector<std::string_view>> m{
        {"invariance",
         {"field.x", "field.y", "field.z", "curve", "branch", "mode", "precision", "order", "tolerance"}},
        {"tangents", {"curve", "branch", "mode", "precision", "order", "steps"}},
        {"qshort", {"poly", "q", "order"}},
        {"relations", {"curve", "degree", "jet_order", "sat.H", "sat.P", "sat.k", "q"}},
        {"integrate",
         {"field.x", "field.y", "field.z", "system.f1", "system.f2", "x_start", "x_end", "y0", "rtol", "atol",
          "max_steps", "log_substitution", "probes", "theta", "jet", "ramification", "branch"}},
        {"classify-pair",
         {"field.x", "field.y", "field.z", "system.f1", "system.f2", "x_start", "x_end", "y0", "eps0", "rtol",
          "atol", "max_steps", "log_substitution", "probes", "census", "turn_threshold", "bounded_turns",
          "decade_factor", "contact_bound"}},
    };
    return m;
}

fs::path output_dir(const std::string &flag, const run_config &cfg, const std::string &command)
{
    if (!flag.empty()) {
        return flag;
    }
    if (const char *env = std::getenv("PENCIL_OUTPUT_DIR"); env && *env) {
        return env;
    }
    if (cfg.has("out")) {
        return cfg.require("out");
    }
    return fs::path("pencil-out") / command;
}

int run_subcommand(const std::string &command, const command_options &o)
{
    run_config cfg = o.config_file.empty() ? run_config{} : run_config::load(o.config_file);
    if (cfg.has("command") && cfg.require("command") != command) {
        throw pencil::config_error("config file is for '" + cfg.require("command") + "', not '" + command + "'");
    }
    cfg.set("command", command);
    for (const auto &[k, v] : o.keys) {
        cfg.set(k, v);
    }
    for (const auto &s : o.sets) {
        const auto eq = s.find('=');
        if (eq == std::string::npos) {
            throw pencil::config_error("--set expects KEY=VALUE, got '" + s + "'");
        }
        cfg.set(trim(std::string_view(s).substr(0, eq)), trim(std::string_view(s).substr(eq + 1)));
    }
    const auto dir = output_dir(o.out, cfg, command);
    const auto result = run_command(cfg, dir);
    if (!o.quiet) {
        std::cout << result.report.dump(2) << "\n";
    }
    if (result.report.contains("error")) {
        std::cerr << "pencil: " << result.report["error"].get<std::string>() << "\n";
    }
    return result.exit_code;
}

int run_registry_command(const std::string &out, bool parallel, const std::string &export_dir, bool list)
{
    if (list) {
        for (const auto &e : example_registry()) {
            std::cout << e.name << "  " << e.config().text("description") << "\n";
        }
        return exit_code::success;
    }
    if (!export_dir.empty()) {
        fs::create_directories(export_dir);
        for (const auto &e : example_registry()) {
            detail::write_text(fs::path(export_dir) / (e.name + ".conf"), e.config().serialize());
        }
        return exit_code::success;
    }
    fs::path dir = out;
    if (dir.empty()) {
        const char *env = std::getenv("PENCIL_OUTPUT_DIR");
        dir = env && *env ? fs::path(env) : fs::path("pencil-out") / "registry";
    }
    const auto outcome = run_registry(dir, parallel);
    for (const auto &e : outcome.summary["entries"]) {
        std::cout << (e["ok"].get<bool>() ? "ok    " : "FAIL  ") << e["name"].get<std::string>() << "  exit "
                  << e["exit_code"] << "\n";
        for (const auto &f : e["facts"]) {
            if (!f["ok"].get<bool>()) {
                std::cout << "      " << f["pointer"].get<std::string>() << ": expected " << f["expected"].dump()
                          << ", got " << f["actual"].dump() << "\n";
            }
        }
    }
    std::cout << "registry written to " << (dir / "registry.json").string() << "\n";
    return outcome.all_ok ? exit_code::success : exit_code::negative;
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"pencil: formal invariant curves, pair dichotomy and relation search"};
    app.require_subcommand(1);

    std::map<std::string, command_options> options;
    for (const auto &[name, keys] : command_keys()) {
        auto &o = options[name];
        auto *sub = app.add_subcommand(name, "");
        sub->add_option("--config", o.config_file, "Run configuration file")->check(CLI::ExistingFile);
        sub->add_option("--example", o.keys["example"], "Start from a registry example");
        sub->add_option("--out", o.out, "Output directory");
        sub->add_option("--set", o.sets, "Set any configuration key, KEY=VALUE");
        sub->add_flag("--quiet", o.quiet, "Do not print the report");
        for (auto key : keys) {
            std::string flags = flag_name(key);
            if (key == "degree") {
                flags += ",--deg";
            }
            sub->add_option(flags, o.keys[std::string(key)], std::string("Sets '") + std::string(key) + "'");
        }
    }
    app.get_subcommand("invariance")->description("Check a formal curve against a vector field");
    app.get_subcommand("tangents")->description("Iterated tangent directions of a formal curve");
    app.get_subcommand("qshort")->description("Check whether a polynomial is q-short and positive");
    app.get_subcommand("relations")->description("Search polynomial relations along a jet");
    app.get_subcommand("integrate")->description("Integrate a reduced system");
    app.get_subcommand("classify-pair")->description("Classify a pair of solutions");

    std::string registry_out, export_dir;
    bool parallel = false, list = false;
    auto *reg = app.add_subcommand("registry", "Run every registry example and check its facts");
    reg->add_option("--out", registry_out, "Output directory");
    reg->add_flag("--parallel", parallel, "Run entries concurrently");
    reg->add_option("--export", export_dir, "Write each entry's config file into DIR and exit");
    reg->add_flag("--list", list, "List the entries and exit");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : exit_code::usage;
    }

    try {
        if (reg->parsed()) {
            return run_registry_command(registry_out, parallel, export_dir, list);
        }
        for (auto &[name, o] : options) {
            if (app.get_subcommand(name)->parsed()) {
                std::erase_if(o.keys, [](const auto &kv) { return kv.second.empty(); });
                return run_subcommand(name, o);
            }
        }
    } catch (const pencil::error &e) {
        std::cerr << "pencil: " << e.what() << "\n";
        return e.classification() == pencil::error_class::usage ? exit_code::usage : exit_code::numeric;
    } catch (const std::exception &e) {
        std::cerr << "pencil: " << e.what() << "\n";
        return exit_code::numeric;
    }
    return exit_code::usage;
}
