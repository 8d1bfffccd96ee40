#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

namespace fs = std::filesystem;

namespace {

struct CmdResult {
    int exit_code = -1;
    std::string out;
};

/// Runs the CLI binary with `args`, capturing stdout; stderr goes to
/// `err_path` when given, else to /dev/null.
CmdResult run_cli(const std::string& args, const std::string& err_path = "") {
    const std::string err = err_path.empty() ? "/dev/null" : err_path;
    const std::string cmd = std::string(HOMOGLAB_CLI_PATH) + " " + args + " 2>" + err;
    CmdResult res;
    std::FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::array<char, 4096> buf{};
    std::size_t got = 0;
    while ((got = std::fread(buf.data(), 1, buf.size(), pipe)) > 0)
        res.out.append(buf.data(), got);
    const int status = pclose(pipe);
    res.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return res;
}

std::string read_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const fs::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary);
    out << text;
}

fs::path fresh_dir(const char* name) {
    const fs::path p = fs::temp_directory_path() / name;
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

} // namespace

TEST_CASE("list shows the full registry and honors the filter") {
    const CmdResult all = run_cli("list");
    CHECK(all.exit_code == 0);
    for (const char* name : {"cesaro-extract", "counterexample-1d", "counterexample-2d",
                             "defect-corrector", "gns-suite", "harmonic-1d", "laminate-2d",
                             "rate-sweep-1d"})
        CHECK(all.out.find(name) != std::string::npos);

    const CmdResult filtered = run_cli("list counter");
    CHECK(filtered.exit_code == 0);
    int lines = 0;
    for (char c : filtered.out) lines += c == '\n';
    CHECK(lines == 2);
    CHECK(filtered.out.find("counterexample-1d") != std::string::npos);
    CHECK(filtered.out.find("counterexample-2d") != std::string::npos);
}

TEST_CASE("describe prints the scenario defaults") {
    const CmdResult r = run_cli("describe harmonic-1d");
    CHECK(r.exit_code == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["scenario"] == "harmonic-1d");
    CHECK(j["defaults"]["resolution"] == 512);
}

TEST_CASE("run produces a summary with the harmonic-mean tensor and is deterministic") {
    const fs::path dir = fresh_dir("homoglab_cli_run");
    const fs::path cfg = dir / "config.json";
    write_file(cfg, "{\"scenario\": \"harmonic-1d\", \"output_dir\": \"" +
                        (dir / "out").string() + "\", \"params\": {\"resolution\": 256}}");
    const CmdResult r = run_cli("run " + cfg.string());
    CHECK(r.exit_code == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(std::fabs(j["result"]["a_star"].get<double>() - std::sqrt(3.0)) < 1e-4);
    CHECK(j["config"]["scenario"] == "harmonic-1d");
    CHECK(j["config"]["params"]["resolution"] == 256);

    const fs::path summary = dir / "out" / "summary.json";
    REQUIRE(fs::exists(summary));
    const std::string first = read_file(summary);
    CHECK(first == r.out);

    const CmdResult again = run_cli("run " + cfg.string());
    CHECK(again.exit_code == 0);
    CHECK(read_file(summary) == first);  // byte-identical rerun
    fs::remove_all(dir);
}

TEST_CASE("an unknown scenario exits 2 and lists the registry in the error") {
    const fs::path dir = fresh_dir("homoglab_cli_unknown");
    const fs::path cfg = dir / "config.json";
    write_file(cfg, "{\"scenario\": \"no-such-thing\"}");
    const fs::path errfile = dir / "err.json";
    const CmdResult r = run_cli("run " + cfg.string(), errfile.string());
    CHECK(r.exit_code == 2);
    const auto err = nlohmann::json::parse(read_file(errfile));
    CHECK(err["error"]["code"] == "ScenarioUnknown");
    bool found = false;
    for (const auto& n : err["error"]["registry"])
        if (n == "harmonic-1d") found = true;
    CHECK(found);
    fs::remove_all(dir);
}

TEST_CASE("malformed configs exit 2") {
    const fs::path dir = fresh_dir("homoglab_cli_badcfg");

    const fs::path broken = dir / "broken.json";
    write_file(broken, "{\"scenario\": ");
    CHECK(run_cli("run " + broken.string()).exit_code == 2);

    const fs::path unknown_param = dir / "param.json";
    write_file(unknown_param,
               "{\"scenario\": \"harmonic-1d\", \"params\": {\"reso\": 64}}");
    const fs::path errfile = dir / "err.json";
    const CmdResult r = run_cli("run " + unknown_param.string(), errfile.string());
    CHECK(r.exit_code == 2);
    CHECK(nlohmann::json::parse(read_file(errfile))["error"]["code"] == "ConfigInvalid");

    const fs::path unknown_key = dir / "key.json";
    write_file(unknown_key, "{\"scenario\": \"harmonic-1d\", \"threads\": 2}");
    CHECK(run_cli("run " + unknown_key.string()).exit_code == 2);

    CHECK(run_cli("run " + (dir / "missing.json").string()).exit_code == 2);
    CHECK(run_cli("frobnicate").exit_code == 2);
    fs::remove_all(dir);
}

TEST_CASE("numerical failures exit 3 with a structured error") {
    const fs::path dir = fresh_dir("homoglab_cli_numfail");
    const fs::path cfg = dir / "config.json";
    write_file(cfg, "{\"scenario\": \"counterexample-2d\", \"output_dir\": \"" +
                        (dir / "out").string() +
                        "\", \"params\": {\"cells_per_unit\": 16, \"n_list\": [1]}}");
    const fs::path errfile = dir / "err.json";
    const CmdResult r = run_cli("run " + cfg.string(), errfile.string());
    CHECK(r.exit_code == 3);
    const auto err = nlohmann::json::parse(read_file(errfile));
    CHECK(err["error"]["code"] == "ResolutionInsufficient");
    fs::remove_all(dir);
}

TEST_CASE("HOMOGLAB_OUT overrides the configured output directory") {
    const fs::path dir = fresh_dir("homoglab_cli_envout");
    const fs::path cfg = dir / "config.json";
    write_file(cfg, "{\"scenario\": \"harmonic-1d\", \"output_dir\": \"" +
                        (dir / "ignored").string() +
                        "\", \"params\": {\"resolution\": 64}}");
    const fs::path override_dir = dir / "override";
    setenv("HOMOGLAB_OUT", override_dir.string().c_str(), 1);
    const CmdResult r = run_cli("run " + cfg.string());
    unsetenv("HOMOGLAB_OUT");
    CHECK(r.exit_code == 0);
    CHECK(fs::exists(override_dir / "summary.json"));
    CHECK_FALSE(fs::exists(dir / "ignored"));
    fs::remove_all(dir);
}
