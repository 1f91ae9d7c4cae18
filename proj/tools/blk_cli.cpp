// Command-line front end: run / decay / verify-inequalities / convergence.
// Exit codes: 0 success, 2 configuration error, 3 blow-up, 4 I/O error,
// 5 theorem hypotheses not met.

#include <cstdio>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "blk/runner.hpp"

namespace {

struct DecayOverrides {
    double amplitude = -1.0;
    int nx = -1;
    double dt = -1.0;
    double t_end = -1.0;
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"2D Benney-Lin-Kawahara solver and verification harness"};
    app.require_subcommand(1);

    std::string config_path, out_dir, preset;
    std::uint64_t seed = 1;
    bool have_seed = false;
    int count = 100;
    DecayOverrides dov;
    blk::ConvergenceOptions conv;

    CLI::App* c_run = app.add_subcommand("run", "execute a configured simulation");
    c_run->add_option("--config", config_path, "flat key=value config file")->required();
    c_run->add_option("--out", out_dir, "output directory (overrides config)");
    c_run->add_option("--seed", seed, "random seed (overrides config)")
        ->each([&](const std::string&) { have_seed = true; });

    CLI::App* c_decay = app.add_subcommand("decay", "run a theorem preset and verify its envelope");
    c_decay->add_option("preset", preset, "thm61 | thm62 | thm63 | thm64")->required();
    c_decay->add_option("--out", out_dir, "output directory");
    c_decay->add_option("--amplitude", dov.amplitude, "override initial amplitude");
    c_decay->add_option("--nx", dov.nx, "override interior x-node count");
    c_decay->add_option("--dt", dov.dt, "override time step");
    c_decay->add_option("--t-end", dov.t_end, "override final time");

    CLI::App* c_ver = app.add_subcommand("verify-inequalities",
                                         "property sweep over random compatible fields");
    c_ver->add_option("--seed", seed, "sweep seed");
    c_ver->add_option("--count", count, "number of random fields");
    c_ver->add_option("--out", out_dir, "output directory");

    CLI::App* c_conv = app.add_subcommand("convergence", "manufactured-solution order ladder");
    c_conv->add_option("--out", out_dir, "output directory");
    c_conv->add_option("--nx-levels", conv.nx_levels, "spatial resolutions");
    c_conv->add_option("--dt-levels", conv.dt_levels, "time steps for the temporal ladder");
    c_conv->add_option("--amplitude", conv.amplitude, "manufactured amplitude");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : blk::exit_config;
    }

    try {
        if (c_run->parsed()) {
            blk::RunConfig cfg = blk::load_config_file(config_path);
            if (have_seed) cfg.seed = seed;
            const std::string dir = out_dir.empty() ? cfg.out_dir : out_dir;
            return blk::cmd_run(cfg, dir);
        }
        if (c_decay->parsed()) {
            blk::RunConfig cfg = blk::preset_config(preset);
            if (dov.amplitude >= 0.0) cfg.amplitude = dov.amplitude;
            if (dov.nx > 0) cfg.nx = dov.nx;
            if (dov.dt > 0.0) cfg.dt = dov.dt;
            if (dov.t_end > 0.0) cfg.t_end = dov.t_end;
            const std::string dir = out_dir.empty() ? cfg.out_dir : out_dir;
            return blk::cmd_decay(cfg, dir);
        }
        if (c_ver->parsed()) {
            const std::string dir = out_dir.empty() ? "out" : out_dir;
            return blk::cmd_verify_inequalities(seed, count, dir);
        }
        if (c_conv->parsed()) {
            const std::string dir = out_dir.empty() ? "out" : out_dir;
            return blk::cmd_convergence(conv, dir);
        }
    } catch (const blk::io_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return blk::exit_io;
    } catch (const blk::solver_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return blk::exit_blowup;
    } catch (const blk::error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return blk::exit_config;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return blk::exit_config;
}
