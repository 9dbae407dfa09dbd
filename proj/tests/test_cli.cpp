#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <sys/wait.h>

#include <gtest/gtest.h>

#include <pencil/cli/commands.hpp>

using namespace pencil;
using namespace pencil::cli;
namespace fs = std::filesystem;

namespace
{

fs::path scratch(const std::string &name)
{
    const auto dir = fs::temp_directory_path() / ("pencil-test-" + std::to_string(::getpid())) / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path &p)
{
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

json strip_timestamp(json j)
{
    j.erase("timestamp");
    return j;
}

} // namespace

TEST(Config, ParseAndSerialize)
{
    const auto c = run_config::parse("# comment\n\ncommand = qshort\n  poly =  x + x^2  \nq = 1\n");
    EXPECT_EQ(c.require("poly"), "x + x^2");
    EXPECT_EQ(c.integer("q", 0), 1);
    EXPECT_EQ(c.serialize(), "command = qshort\npoly = x + x^2\nq = 1\n");
    EXPECT_EQ(run_config::parse(c.serialize()), c);
}

TEST(Config, Errors)
{
    try {
        run_config::parse("command = qshort\nbogus = 1\n");
        FAIL() << "expected a config error";
    } catch (const config_error &e) {
        EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos);
    }
    EXPECT_THROW(run_config::parse("q = 1\nq = 2\n"), config_error);
    EXPECT_THROW(run_config::parse("no equals sign\n"), config_error);
    EXPECT_THROW(run_config::parse("q = 0\n"), config_error);
    EXPECT_THROW(run_config::parse("rtol = fast\n"), config_error);
    EXPECT_THROW(run_config::parse("mode = approximate\n"), config_error);
    EXPECT_THROW(run_config::parse("census = z1;;z2\n"), config_error);
    EXPECT_THROW(run_config::load("/nonexistent/pencil.conf"), config_error);
}

TEST(Config, Lists)
{
    const auto c = run_config::parse("probes = 0.1, 0.05,0.02\ncensus = z1; y1 - x\n");
    EXPECT_EQ(c.reals("probes"), (std::vector<double>{0.1, 0.05, 0.02}));
    EXPECT_EQ(c.list("census"), (std::vector<std::string>{"z1", "y1 - x"}));
}

TEST(Registry, EveryEntryRoundTrips)
{
    for (const auto &e : example_registry()) {
        const auto c = e.config();
        EXPECT_EQ(run_config::parse(c.serialize()), c) << e.name;
        EXPECT_TRUE(c.has("command")) << e.name;
        EXPECT_TRUE(c.has("description")) << e.name;
        for (const auto &f : e.facts) {
            EXPECT_TRUE(f.basis == "stated" || f.basis == "derived") << e.name;
        }
    }
    EXPECT_NE(find_example("xi1"), nullptr);
    EXPECT_EQ(find_example("nope"), nullptr);
}

TEST(Registry, RoundTripGivesIdenticalRun)
{
    for (const char *name : {"xi1", "tangents-cubic", "sat-xi1"}) {
        const auto *e = find_example(name);
        const auto a = run_command(e->config(), {});
        const auto b = run_command(run_config::parse(e->config().serialize()), {});
        EXPECT_EQ(a.report.dump(), b.report.dump()) << name;
    }
}

TEST(Commands, ExitCodes)
{
    auto run = [](const std::string &text) { return run_command(run_config::parse(text), {}).exit_code; };
    EXPECT_EQ(run("command = invariance\nexample = xi1\n"), exit_code::success);
    EXPECT_EQ(run("command = invariance\nexample = xi1\ncurve = t, E(t) + t^5, E(2*t)\n"), exit_code::negative);
    EXPECT_EQ(run("command = qshort\npoly = x + x^2\nq = 1\n"), exit_code::negative);
    EXPECT_EQ(run("command = qshort\n"), exit_code::usage);
    EXPECT_EQ(run("command = invariance\nexample = no-such-example\n"), exit_code::usage);
    EXPECT_EQ(run("command = tangents\ncurve = t, y\n"), exit_code::usage);
    EXPECT_EQ(run("command = integrate\nexample = euler-jets\nmax_steps = 5\n"), exit_code::numeric);
    EXPECT_EQ(run("command = tangents\ncurve = t, t^2\nsteps = 4\norder = 3\n"), exit_code::numeric);
}

TEST(Commands, ExampleOverlay)
{
    const auto r = run_command(run_config::parse("command = invariance\nexample = xi1\norder = 12\n"), {});
    EXPECT_EQ(r.report["config"]["order"], "12");
    EXPECT_EQ(r.report["example"], "xi1");
    EXPECT_EQ(r.report["result"]["checked_order"], 12);
}

TEST(Commands, ClassifyPairWritesArtifacts)
{
    const auto dir = scratch("classify");
    const auto *e = find_example("rotating");
    const auto r = run_command(e->config(), dir);
    EXPECT_EQ(r.exit_code, 0);
    for (const char *f : {"report.json", "trajectory.csv", "theta.svg", "contact.svg"}) {
        EXPECT_TRUE(fs::exists(dir / f)) << f;
    }
    EXPECT_EQ(json::parse(slurp(dir / "report.json")), r.report);
    const auto csv = slurp(dir / "trajectory.csv");
    EXPECT_EQ(csv.substr(0, csv.find('\n')), "x,y1,y2,z1,z2");
    for (const char *f : {"theta.svg", "contact.svg"}) {
        const auto svg = slurp(dir / f);
        EXPECT_EQ(svg.rfind("<svg", 0), 0u) << f;
        EXPECT_EQ(svg.find("href"), std::string::npos) << f;
        EXPECT_NE(svg.find("</svg>"), std::string::npos) << f;
    }
}

TEST(Registry, DeterministicAcrossRuns)
{
    const auto a = run_registry(scratch("reg-a"));
    const auto b = run_registry(scratch("reg-b"), true);
    EXPECT_TRUE(a.all_ok);
    EXPECT_EQ(strip_timestamp(a.summary).dump(), strip_timestamp(b.summary).dump());
    EXPECT_TRUE(a.summary.contains("timestamp"));
}

#ifdef PENCIL_CLI_PATH

namespace
{

int run_cli(const std::string &args, const std::string &env = {})
{
    const std::string cmd = env + " " + PENCIL_CLI_PATH + " " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

} // namespace

TEST(Binary, ExitCodeContract)
{
    const auto dir = scratch("binary");
    const auto out = " --quiet --out " + dir.string();
    EXPECT_EQ(run_cli("invariance --example xi1 --order 30" + out), 0);
    EXPECT_EQ(run_cli("invariance --example xi1 --curve \"t,E(t)+t^5,E(2*t)\"" + out), 1);
    EXPECT_EQ(run_cli("qshort --poly \"x+x^2\" --q 1" + out), 1);
    EXPECT_EQ(run_cli("relations --curve \"x,E(x),E(2*x)\" --deg 3" + out), 0);
    EXPECT_EQ(json::parse(slurp(dir / "report.json"))["result"]["transcendence_evidence"], true);
    EXPECT_EQ(run_cli("tangents --curve \"t,t^2,t^3\" --steps 3" + out), 0);
    EXPECT_EQ(run_cli("invariance --no-such-flag"), 2);
    EXPECT_EQ(run_cli("invariance --order 30" + out), 2);
    EXPECT_EQ(run_cli(""), 2);
}

TEST(Binary, ConfigFileAndOutputOverride)
{
    const auto dir = scratch("binary-config");
    const auto conf = dir / "run.conf";
    std::ofstream(conf) << find_example("qshort-2x")->config().serialize();
    const auto env_dir = dir / "from-env";
    EXPECT_EQ(run_cli("qshort --quiet --config " + conf.string(), "PENCIL_OUTPUT_DIR=" + env_dir.string()), 0);
    EXPECT_TRUE(fs::exists(env_dir / "report.json"));
    EXPECT_EQ(run_cli("invariance --quiet --config " + conf.string(), "PENCIL_OUTPUT_DIR=" + env_dir.string()), 2);

    const auto exported = dir / "exported";
    EXPECT_EQ(run_cli("registry --export " + exported.string()), 0);
    for (const auto &e : example_registry()) {
        EXPECT_EQ(run_config::load((exported / (e.name + ".conf")).string()), e.config()) << e.name;
    }
}

#endif
