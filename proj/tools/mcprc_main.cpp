#include "mcprc/common.hpp"
#include "mcprc/experiment.hpp"

#include <CLI11.hpp>

#include <iostream>

namespace {

struct CommonArgs {
    std::string config_path;
    std::string out_dir;
    long long seed = -1;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("--config", args.config_path, "experiment config (JSON)")
        ->required();
    cmd->add_option("--out", args.out_dir, "output directory (overrides config)");
    cmd->add_option("--seed", args.seed, "RNG seed (overrides config)");
}

int run_mode(const CommonArgs& args, mcprc::Mode mode) {
    mcprc::ExperimentConfig config =
        mcprc::ExperimentConfig::from_file(args.config_path);
    if (config.mode != mode) {
        throw mcprc::ConfigError("config mode '" + mcprc::to_string(config.mode) +
                                 "' does not match subcommand '" +
                                 mcprc::to_string(mode) + "'");
    }
    if (!args.out_dir.empty()) config.output_dir = args.out_dir;
    if (args.seed >= 0) {
        config.rng_seed = static_cast<std::uint64_t>(args.seed);
        config.stochastic.rng_seed = config.rng_seed;
    }

    const mcprc::ExperimentResult result = mcprc::run_experiment(config);
    std::cout << result.to_json().dump(2) << std::endl;
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"molecular-communication reservoir computing toolkit"};
    app.require_subcommand(1);

    struct Sub {
        const char* name;
        const char* help;
        mcprc::Mode mode;
    };
    const Sub subs[] = {
        {"evaluate", "run one channel/task evaluation", mcprc::Mode::evaluate},
        {"optimize", "Bayesian search over the biophysical knobs",
         mcprc::Mode::optimize},
        {"crisscross", "3x3 parameter-set vs task validation matrix",
         mcprc::Mode::crisscross},
        {"stochastic-compare", "deterministic vs particle-based comparison",
         mcprc::Mode::stochastic_compare},
        {"filter-sweep", "stochastic NRMSE across moving-average windows",
         mcprc::Mode::filter_sweep},
    };

    CommonArgs args[std::size(subs)];
    for (std::size_t i = 0; i < std::size(subs); ++i) {
        add_common(app.add_subcommand(subs[i].name, subs[i].help), args[i]);
    }

    CLI11_PARSE(app, argc, argv);

    try {
        for (std::size_t i = 0; i < std::size(subs); ++i) {
            if (app.get_subcommand(subs[i].name)->parsed()) {
                return run_mode(args[i], subs[i].mode);
            }
        }
        std::cerr << "error: no subcommand selected\n";
        return 2;
    } catch (const mcprc::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const mcprc::ResourceCapError& e) {
        std::cerr << "resource cap: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 4;
    }
}
