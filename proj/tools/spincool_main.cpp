#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "spincool/errors.hpp"
#include "spincool/runner.hpp"
#include "spincool/version.hpp"

namespace {

const char* const kCommands[] = {"simulate-markov", "simulate-full", "compare",
                                 "fit-t1",          "sweep-size",    "sweep-thermal",
                                 "check-regime"};

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"spincool: cavity cooling simulator for spin ensembles"};
    app.set_version_flag("--version", std::string("spincool ") + spincool::version_string);
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    int workers = 0;
    std::vector<std::string> overrides;

    for (const char* name : kCommands) {
        CLI::App* sub = app.add_subcommand(name);
        sub->add_option("--config", config_path, "run configuration file")
            ->required();
        sub->add_option("--out", out_dir,
                        "output directory (default: $SPINCOOL_OUT_DIR, then the "
                        "config's cli_io.out_dir)");
        sub->add_option("--workers", workers, "worker threads for sweeps");
        sub->add_option("--override", overrides,
                        "config override section.key=value (repeatable)");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        spincool::RunConfig cfg = spincool::load_config(config_path, overrides);
        if (workers > 0) cfg.workers = workers;
        if (out_dir.empty()) {
            if (const char* env = std::getenv("SPINCOOL_OUT_DIR"))
                out_dir = env;
            else
                out_dir = cfg.out_dir;
        }
        const std::string command = app.get_subcommands().front()->get_name();
        spincool::run_command(command, cfg, out_dir);
        std::cout << command << ": ok, artifacts in " << out_dir << "\n";
        return 0;
    } catch (const spincool::NumericsError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 2;
    } catch (const spincool::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
