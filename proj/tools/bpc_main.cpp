#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "bpc/runner/commands.hpp"

namespace {

struct CommonFlags {
    std::string config_path;
    std::uint64_t seed = 0;
    long long samples = 0;
    std::string out;
    std::string format;
};

void add_common(CLI::App* sub, CommonFlags& flags) {
    sub->add_option("--config", flags.config_path, "JSON experiment config");
    sub->add_option("--seed", flags.seed, "override the config seed");
    sub->add_option("--samples", flags.samples, "override mc_samples");
    sub->add_option("--out", flags.out, "override the output path");
    sub->add_option("--format", flags.format, "override the output format (csv|json)")
        ->check(CLI::IsMember({"csv", "json"}));
}

// Applies flag overrides on top of the loaded config.
bpc::runner::ExperimentConfig make_config(const CLI::App* sub, const CommonFlags& flags,
                                          bool allow_default_verify) {
    bpc::runner::ExperimentConfig cfg;
    if (!flags.config_path.empty()) {
        cfg = bpc::runner::load_config_file(flags.config_path);
    } else if (allow_default_verify) {
        cfg = bpc::runner::default_verify_config();
    } else {
        throw bpc::runner::ConfigError("--config is required for this command");
    }
    if (sub->count("--seed") > 0) cfg.seed = flags.seed;
    if (sub->count("--samples") > 0) {
        if (flags.samples < 1) {
            throw bpc::runner::ConfigError("--samples must be >= 1");
        }
        cfg.mc_samples = flags.samples;
    }
    if (sub->count("--out") > 0) cfg.output_path = flags.out;
    if (sub->count("--format") > 0) {
        cfg.output_format = bpc::runner::parse_output_format(flags.format);
    }
    return cfg;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "bpc: exact distributions, Monte Carlo cross-checks and sandwich reports\n"
        "for the coupled Bernoulli / Poisson partial-sum deviation"};
    app.require_subcommand(1);

    CommonFlags flags;
    CLI::App* bounds = app.add_subcommand(
        "bounds", "evaluate every bound and the exact oracle per (p, z)");
    CLI::App* simulate = app.add_subcommand(
        "simulate", "Monte Carlo tail estimates against the exact bracket");
    CLI::App* verify = app.add_subcommand(
        "verify", "run the invariant suite over randomized instances");
    add_common(bounds, flags);
    add_common(simulate, flags);
    add_common(verify, flags);
    bool corrupt = false;
    verify->add_flag("--debug-corrupt-constant", corrupt,
                     "self-test: corrupt the nc2 constant so verify must fail");

    CLI11_PARSE(app, argc, argv);

    try {
        if (bounds->parsed()) {
            return bpc::runner::cmd_bounds(make_config(bounds, flags, false), std::cout);
        }
        if (simulate->parsed()) {
            return bpc::runner::cmd_simulate(make_config(simulate, flags, false),
                                             std::cout);
        }
        bpc::runner::VerifyOptions opts;
        opts.corrupt_nc2 = corrupt;
        return bpc::runner::cmd_verify(make_config(verify, flags, true), opts,
                                       std::cout);
    } catch (const bpc::runner::IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return bpc::runner::exit_io_error;
    } catch (const bpc::runner::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return bpc::runner::exit_config_error;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return bpc::runner::exit_config_error;
    }
}
