#include <cstdio>
#include <exception>
#include <string>

#include <CLI11.hpp>

#include "homoglab/errors.hpp"
#include "homoglab/reports.hpp"
#include "homoglab/scenarios.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

void print_error_json(const std::string& code, const std::string& message,
                      bool with_registry) {
    homoglab::Json err;
    err["error"] = homoglab::Json{{"code", code}, {"message", message}};
    if (with_registry) {
        homoglab::Json names = homoglab::Json::array();
        for (const auto& n : homoglab::scenario_registry_names()) names.push_back(n);
        err["error"]["registry"] = names;
    }
    std::fputs(homoglab::dump_json(err).c_str(), stderr);
}

int classify_and_report(const homoglab::Error& e) {
    const std::string code = e.code();
    const bool config_class = code == "ConfigInvalid" || code == "ScenarioUnknown";
    print_error_json(code, e.what(), code == "ScenarioUnknown");
    return config_class ? kExitConfig : kExitNumerical;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"homoglab: numerical laboratory for discrete homogenization"};
    app.require_subcommand(1);

    std::string config_path, filter, scenario_name;
    int jobs = 0;

    CLI::App* run = app.add_subcommand("run", "run a scenario from a JSON config");
    run->add_option("config", config_path, "path to the config file")->required();
    run->add_option("--jobs", jobs, "cap on worker threads (overrides config)");

    CLI::App* list = app.add_subcommand("list", "list available scenarios");
    list->add_option("filter", filter, "substring filter on scenario names");

    CLI::App* describe = app.add_subcommand("describe", "show a scenario's defaults");
    describe->add_option("scenario", scenario_name, "scenario name")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        app.exit(e);
        return kExitConfig;
    }

    try {
        if (run->parsed()) {
            homoglab::ScenarioConfig cfg = homoglab::load_config(config_path);
            if (jobs > 0) cfg.jobs = jobs;
            const homoglab::Json summary = homoglab::run_scenario(cfg);
            std::fputs(homoglab::dump_json(summary).c_str(), stdout);
            return kExitOk;
        }
        if (list->parsed()) {
            for (const auto& info : homoglab::list_scenarios(filter))
                std::printf("%-18s %s\n", info.name.c_str(), info.description.c_str());
            return kExitOk;
        }
        if (describe->parsed()) {
            homoglab::Json j;
            j["scenario"] = scenario_name;
            j["defaults"] = homoglab::scenario_defaults(scenario_name);
            std::fputs(homoglab::dump_json(j).c_str(), stdout);
            return kExitOk;
        }
    } catch (const homoglab::Error& e) {
        return classify_and_report(e);
    } catch (const std::exception& e) {
        print_error_json("Internal", e.what(), false);
        return kExitNumerical;
    }
    return kExitConfig;
}
