#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "risbeam/artifacts.hpp"
#include "risbeam/version.hpp"

int main(int argc, char** argv) {
    CLI::App app{"risbeam: one-bit reflective-surface beam synthesis toolkit"};
    app.set_version_flag("--version", std::string("risbeam ") + risbeam::kVersion);
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    bool quiet = false;
    app.add_option("--config", config_path, "Scenario config JSON")->check(CLI::ExistingFile);
    app.add_option("--out", out_dir, "Output directory (overrides config output_dir)");
    app.add_flag("--quiet", quiet, "Suppress progress output");

    app.add_subcommand("pattern", "Scattered pattern, metrics and principal cuts");
    app.add_subcommand("sweep-freq", "Per-frequency synthesis and metrics");
    app.add_subcommand("sweep-angle", "Per-target synthesis and metrics");
    app.add_subcommand("contrast", "Configured vs all-OFF link transmission");
    app.add_subcommand("band", "Unit-cell operating band report");
    auto* codebook = app.add_subcommand("codebook", "Control frames for the configured scenarios");
    bool all_off = false;
    codebook->add_flag("--all-off", all_off, "Emit the all-OFF baseline frame only");
    auto* proto = app.add_subcommand("protocol-check", "Validate a serial-protocol transcript");
    std::string input_path;
    proto->add_option("input", input_path, "Transcript file, one command per line")
        ->check(CLI::ExistingFile);

    CLI11_PARSE(app, argc, argv);

    risbeam::ScenarioConfig cfg;
    try {
        if (!config_path.empty()) cfg = risbeam::load_config(config_path);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }

    risbeam::DispatchOptions opts;
    opts.out_dir = out_dir;
    opts.input_path = input_path;
    opts.all_off = all_off;
    opts.quiet = quiet;
    return risbeam::dispatch(app.get_subcommands().front()->get_name(), cfg, opts);
}
