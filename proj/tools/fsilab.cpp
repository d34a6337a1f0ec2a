#include <CLI11.hpp>

#include "fsilab/commands.hpp"

int main(int argc, char** argv) {
    CLI::App app{"fsilab: 1-D fluid-solid interaction laboratory"};
    app.require_subcommand(1);

    fsilab::CommandOptions opts;
    const auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", opts.config_path, "Path to the JSON run configuration")
            ->required();
        sub->add_option("--out", opts.out_dir_override,
                        "Output directory (overrides output.directory)");
        sub->add_flag("--emit-plotscript", opts.emit_plotscript,
                      "Write a generic plotting script next to the CSV outputs");
    };

    CLI::App* forward = app.add_subcommand("forward", "Coupled forward simulation");
    CLI::App* inverse = app.add_subcommand("inverse", "Trajectory / boundary reconstruction");
    CLI::App* sweep = app.add_subcommand("sweep", "Noise-stability sweep");
    CLI::App* convergence = app.add_subcommand("convergence", "Refinement order studies");
    CLI::App* oracle = app.add_subcommand("oracle", "Closed-form counterexample traces");
    for (CLI::App* sub : {forward, inverse, sweep, convergence, oracle}) { add_common(sub); }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    if (forward->parsed()) { return fsilab::cmd_forward(opts); }
    if (inverse->parsed()) { return fsilab::cmd_inverse(opts); }
    if (sweep->parsed()) { return fsilab::cmd_sweep(opts); }
    if (convergence->parsed()) { return fsilab::cmd_convergence(opts); }
    if (oracle->parsed()) { return fsilab::cmd_oracle(opts); }
    return 2;
}
