// parex: parametric-instability runs from a line-oriented config file.

#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "parex/config.hpp"
#include "parex/error.hpp"
#include "parex/io.hpp"
#include "parex/runner.hpp"

namespace {

struct Flags {
    std::string config;
    std::optional<std::string> out;
    std::optional<std::uint64_t> seed;
    std::optional<unsigned> workers;
    std::optional<std::string> formats;
};

void add_flags(CLI::App* cmd, Flags& f) {
    cmd->add_option("--config", f.config, "config file")->required();
    cmd->add_option("--out", f.out, "output directory (overrides output.directory)");
    cmd->add_option("--seed", f.seed, "random seed (overrides seed)");
    cmd->add_option("--workers", f.workers, "worker threads (overrides workers)")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--format", f.formats, "comma list of csv, json, svg");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Parametric instability of a dipole moving above a corrugated surface"};
    app.set_version_flag("--version", parex::artifact_version());
    app.require_subcommand(1);

    Flags flags;
    for (const char* name : {"simulate", "floquet-map", "threshold", "estimate", "sweep"})
        add_flags(app.add_subcommand(name, std::string("run the ") + name + " command"), flags);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : static_cast<int>(parex::ErrorCategory::config);
    }

    try {
        parex::RunConfig cfg = parex::load_config(flags.config);
        parex::set_command(cfg, app.get_subcommands().front()->get_name());
        if (flags.out) cfg.output_dir = *flags.out;
        if (flags.seed) {
            cfg.seed = *flags.seed;
            cfg.simulate.options.seed = *flags.seed;
        }
        if (flags.workers) {
            cfg.workers = *flags.workers;
            cfg.floquet.map.workers = *flags.workers;
        }
        if (flags.formats) parex::set_formats(cfg, *flags.formats);
        parex::run(cfg, std::cout);
        return 0;
    } catch (const parex::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return static_cast<int>(e.category());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
