#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cstdio>
#include <sys/wait.h>
#include <cstdlib>
#include <fstream>
#include <regex>
#include <string>

#include <json.hpp>

using json = nlohmann::json;

namespace {

struct RunResult {
    int exit_code = -1;
    std::string stdout_text;
};

RunResult run_cli(const std::string& args) {
    std::string cmd = std::string(LOEWNER_CLI_PATH) + " " + args + " 2>/dev/null";
    RunResult r;
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::array<char, 4096> buf{};
    std::size_t got;
    while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0)
        r.stdout_text.append(buf.data(), got);
    int status = pclose(pipe);
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::string strip_timing(const std::string& report) {
    static const std::regex timing_line("\\n\\s*\"timing_s\": [^\\n]*");
    return std::regex_replace(report, timing_line, "");
}

std::string write_temp_json(const std::string& name, const std::string& content) {
    std::string path = "/tmp/loewner_cli_test_" + name + ".json";
    std::ofstream out(path);
    out << content;
    return path;
}

} // namespace

TEST_CASE("exit codes follow the contract") {
    CHECK(run_cli("check-monotone --fn \"t\" --order 5 --trials 50 --seed 1").exit_code == 0);
    CHECK(run_cli("check-monotone --fn \"t^2\" --order 2 --trials 1000 --seed 7").exit_code == 1);
    CHECK(run_cli("check-monotone --fn \"sqrt(t)\" --order 4 --trials 2000 --seed 7").exit_code == 0);

    // flag errors
    CHECK(run_cli("check-monotone --order 2").exit_code == 64);         // missing --fn
    CHECK(run_cli("no-such-command").exit_code == 64);
    CHECK(run_cli("check-monotone --fn \"t\" --order 2 --bogus 1").exit_code == 64);
    CHECK(run_cli("").exit_code == 64);                                  // subcommand required
    CHECK(run_cli("check-monotone --fn \"t\" --order 2 --strict --trials 10").exit_code == 64);

    // input errors
    CHECK(run_cli("check-monotone --fn \"t^\" --order 2 --seed 1").exit_code == 65);
    CHECK(run_cli("check-monotone --fn \"t+x\" --order 2 --seed 1").exit_code == 65);
    CHECK(run_cli("check-monotone --fn \"t\" --order 2 --domain 5:1 --seed 1").exit_code == 65);

    // runtime domain error: sqrt(t-3) leaves the working interval
    CHECK(run_cli("check-monotone --fn \"sqrt(t-3)\" --order 2 --trials 20 --seed 1").exit_code == 2);
}

TEST_CASE("violation reports carry a replayable witness") {
    RunResult r = run_cli("check-monotone --fn \"t^2\" --order 2 --trials 500 --seed 7");
    CHECK(r.exit_code == 1);
    json rep = json::parse(r.stdout_text);
    CHECK(rep["schema"] == 1);
    CHECK(rep["command"] == "check-monotone");
    CHECK(rep["config"]["fn"] == "t^2");
    CHECK(rep["config"]["seed"] == 7);
    CHECK(rep["verdict"]["status"] == "violated");
    CHECK(!rep["verdict"]["witness"].is_null());
    CHECK(rep["verdict"]["witness"]["margin"].get<double>() < 0.0);
}

TEST_CASE("check-concave and check-hp dispatch") {
    CHECK(run_cli("check-concave --fn \"t\" --order 3 --trials 100 --seed 2").exit_code == 0);
    CHECK(run_cli("check-concave --fn \"t^2\" --order 2 --trials 200 --seed 2").exit_code == 1);
    CHECK(run_cli("check-hp --fn \"sqrt(t)\" --order 3 --trials 300 --seed 2").exit_code == 0);
}

TEST_CASE("chain emits four legs") {
    RunResult r = run_cli("chain --fn \"sqrt(t)\" --order 3 --trials 200 --seed 3");
    CHECK(r.exit_code == 0);
    json rep = json::parse(r.stdout_text);
    CHECK(rep["chain"]["concave_n_plus_1"]["status"] == "holds-within-budget");
    CHECK(rep["chain"]["hansen_pedersen_n"]["status"] == "holds-within-budget");
    CHECK(rep["chain"]["companion_monotone_n"]["status"] == "holds-within-budget");
    CHECK(rep["chain"]["concave_half_n"]["status"] == "holds-within-budget");
    CHECK(rep["chain"]["inconsistencies"].empty());

    CHECK(run_cli("chain --fn \"t^2\" --order 2 --trials 300 --seed 3").exit_code == 1);
}

TEST_CASE("check-ps fixtures and states") {
    CHECK(run_cli("check-ps --fn \"t^2\" --dim 4 --trials 50 --seed 1 --fixtures").exit_code == 1);
    CHECK(run_cli("check-ps --fn \"sqrt(t)\" --dim 4 --trials 300 --seed 3").exit_code == 0);
    CHECK(run_cli("check-ps --fn \"t\" --dim 2 --trials 10 --seed 1").exit_code == 0);

    std::string good_state = write_temp_json("state_ok", R"({"n":2,"data":[[0.5,0],[0,0.5]]})");
    CHECK(run_cli("check-ps --fn \"sqrt(t)\" --dim 2 --trials 50 --seed 4 --state " + good_state).exit_code == 0);

    std::string bad_state = write_temp_json("state_bad", R"({"n":2,"data":[[0.9,0],[0,0.9]]})");
    CHECK(run_cli("check-ps --fn \"sqrt(t)\" --dim 2 --trials 50 --seed 4 --state " + bad_state).exit_code == 65);

    std::string missing = "/tmp/loewner_cli_test_does_not_exist.json";
    CHECK(run_cli("check-ps --fn \"sqrt(t)\" --dim 2 --trials 50 --seed 4 --state " + missing).exit_code == 65);
}

TEST_CASE("trace-condition values") {
    RunResult r = run_cli("trace-condition --g \"t^2\" --range 1e-3:1e3 --grid 128");
    CHECK(r.exit_code == 0);
    json rep = json::parse(r.stdout_text);
    double value = rep["infimum"]["value"].get<double>();
    CHECK(value > 0.0);
    CHECK(value <= 3e-3);

    RunResult r2 = run_cli("trace-condition --g \"t\" --range 1:100 --grid 16");
    json rep2 = json::parse(r2.stdout_text);
    CHECK(rep2["infimum"]["value"].get<double>() == 1.0);

    CHECK(run_cli("trace-condition --g \"1/t\" --range 0.1:10 --grid 16").exit_code == 2);
}

TEST_CASE("find-counterexample emits a witness for t^3") {
    RunResult r = run_cli("find-counterexample --g \"t^3\" --dim 2 --trials 100000 --seed 11");
    CHECK(r.exit_code == 1);
    json rep = json::parse(r.stdout_text);
    CHECK(rep["verdict"]["status"] == "violated");
    CHECK(rep["verdict"]["witness"]["property"] == "counterexample");
    CHECK(rep["verdict"]["witness"]["margin"].get<double>() < -1e-7);
    CHECK(rep["verdict"]["witness"]["xi"].size() == 2);

    CHECK(run_cli("find-counterexample --g \"t\" --dim 2 --trials 200 --seed 11").exit_code == 0);
}

TEST_CASE("frechet command on files") {
    std::string a = write_temp_json("frechet_a", R"({"n":2,"data":[[2,0],[0,3]]})");
    std::string c = write_temp_json("frechet_c", R"({"n":2,"data":[[0,1],[1,0]]})");
    RunResult r = run_cli("frechet --fn \"t^2\" --matrix " + a + " --direction " + c);
    CHECK(r.exit_code == 0);
    json rep = json::parse(r.stdout_text);
    // d(t^2)[diag(2,3)](C) = AC + CA = [[0,5],[5,0]]
    CHECK(rep["derivative"]["data"][0][1].get<double>() == doctest::Approx(5.0).epsilon(1e-12));
    CHECK(rep["derivative"]["data"][0][0].get<double>() == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
}

TEST_CASE("fixtures command") {
    RunResult r = run_cli("fixtures");
    CHECK(r.exit_code == 0);
    json rep = json::parse(r.stdout_text);
    CHECK(rep["report"]["all_expected"] == true);
    CHECK(!rep["report"]["dual_reading_note"].get<std::string>().empty());
}

TEST_CASE("reports are deterministic modulo timing, for any jobs count") {
    const char* cmds[] = {
        "check-monotone --fn \"sqrt(t)\" --order 3 --trials 400 --seed 21",
        "check-concave --fn \"t^2\" --order 2 --trials 400 --seed 21",
        "check-ps --fn \"t/(1+t)\" --dim 3 --trials 400 --seed 21",
        "find-counterexample --g \"t^2\" --dim 2 --trials 3000 --seed 21",
    };
    for (const char* cmd : cmds) {
        RunResult j1 = run_cli(std::string(cmd) + " --jobs 1");
        RunResult j1b = run_cli(std::string(cmd) + " --jobs 1");
        RunResult j8 = run_cli(std::string(cmd) + " --jobs 8");
        CHECK(j1.exit_code == j8.exit_code);
        CHECK(strip_timing(j1.stdout_text) == strip_timing(j1b.stdout_text));
        CHECK(strip_timing(j1.stdout_text) == strip_timing(j8.stdout_text));
    }
}

TEST_CASE("seed is echoed when drawn from entropy") {
    RunResult r = run_cli("check-monotone --fn \"t\" --order 2 --trials 20");
    CHECK(r.exit_code == 0);
    json rep = json::parse(r.stdout_text);
    CHECK(rep["config"].contains("seed"));
}

TEST_CASE("asymmetric matrix files are symmetrized with a warning") {
    std::string path = write_temp_json("asym", R"({"n":2,"data":[[1.0,0.5],[0.25,2.0]]})");
    std::string dir = write_temp_json("asym_dir", R"({"n":2,"data":[[0,1],[1,0]]})");
    // capture stderr this time
    std::string cmd = std::string(LOEWNER_CLI_PATH) + " frechet --fn \"t\" --matrix " + path +
                      " --direction " + dir + " 2>&1";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::string out;
    std::array<char, 4096> buf{};
    std::size_t got;
    while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0) out.append(buf.data(), got);
    int status = pclose(pipe);
    CHECK(WEXITSTATUS(status) == 0);
    CHECK(out.find("asymmetry") != std::string::npos);
    CHECK(out.find("symmetrizing") != std::string::npos);
}

TEST_CASE("exit codes stay inside the contract over a flag fuzz corpus") {
    // deterministic shuffle of valid and broken flag fragments
    const std::string fns[] = {"t", "t^2", "sqrt(t)", "t^", "t+x", "log(t)"};
    const std::string orders[] = {"1", "2", "3", "0", "-2"};
    const std::string extras[] = {"", " --trials 30", " --bogus", " --domain 2:1",
                                  " --domain 0.5:5", " --jobs 3"};
    const std::string commands[] = {"check-monotone", "check-concave", "check-hp"};
    int idx = 0;
    for (const auto& cmd : commands)
        for (const auto& fn : fns)
            for (const auto& order : orders) {
                const auto& extra = extras[idx++ % 6];
                RunResult r = run_cli(cmd + " --fn \"" + fn + "\" --order " + order +
                                      " --seed 9" + extra);
                INFO(cmd << " fn=" << fn << " order=" << order << " extra=" << extra);
                CHECK((r.exit_code == 0 || r.exit_code == 1 || r.exit_code == 2 ||
                       r.exit_code == 64 || r.exit_code == 65));
                // broken flags and inputs never report success
                if (fn == "t^" || fn == "t+x") CHECK(r.exit_code >= 2);
                if (extra == " --bogus") CHECK(r.exit_code == 64);
                if (order == "0" || order == "-2") CHECK(r.exit_code >= 2);
            }
}
