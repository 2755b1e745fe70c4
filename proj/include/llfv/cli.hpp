#pragma once

#include <CLI11.hpp>
#include <iostream>
#include <string>
#include <vector>

#include "experiments.hpp"

namespace llfv {

/// Entry point behind the `llfv` binary. Subcommands: convergence, energy,
/// blowup, micromag, picard-check. Each accepts --config PATH (flat
/// key=value text), --out DIR and --seed N.
inline int run_cli(const std::vector<std::string>& args) {
    CLI::App app{"FVEM + Gauss-Seidel projection solver for the 2D Landau-Lifshitz equation"};
    app.require_subcommand(1);

    struct SubOpts {
        std::string config_path;
        std::string out_dir;
        int seed = -1;
    };

    const std::vector<std::pair<std::string, ExperimentKind>> kinds = {
        {"convergence", ExperimentKind::convergence}, {"energy", ExperimentKind::energy},
        {"blowup", ExperimentKind::blowup},           {"micromag", ExperimentKind::micromag},
        {"picard-check", ExperimentKind::picard_check}};

    std::vector<SubOpts> opts(kinds.size());
    for (size_t k = 0; k < kinds.size(); ++k) {
        CLI::App* sub = app.add_subcommand(kinds[k].first);
        sub->add_option("--config", opts[k].config_path, "flat key=value config file");
        sub->add_option("--out", opts[k].out_dir, "output directory (overrides config)");
        sub->add_option("--seed", opts[k].seed, "seed for randomized presets");
    }

    // CLI11 wants argv-style reversed arguments
    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(rev);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        for (size_t k = 0; k < kinds.size(); ++k) {
            CLI::App* sub = app.get_subcommand(kinds[k].first);
            if (!sub->parsed())
                continue;
            const SubOpts& o = opts[k];
            const Config file_cfg = o.config_path.empty()
                                        ? Config::parse_string("", "<defaults>")
                                        : Config::parse_file(o.config_path);

            ExperimentConfig cfg;
            switch (kinds[k].second) {
            case ExperimentKind::convergence: cfg = convergence_config(file_cfg); break;
            case ExperimentKind::energy: cfg = energy_config(file_cfg); break;
            case ExperimentKind::blowup: cfg = blowup_config(file_cfg); break;
            case ExperimentKind::micromag: cfg = micromag_config(file_cfg); break;
            case ExperimentKind::picard_check: cfg = picard_config(file_cfg); break;
            }
            if (!o.out_dir.empty())
                cfg.out_dir = o.out_dir;
            if (o.seed >= 0)
                cfg.seed = static_cast<std::uint64_t>(o.seed);

            RunArtifacts art;
            switch (kinds[k].second) {
            case ExperimentKind::convergence: art = run_convergence(cfg); break;
            case ExperimentKind::energy: art = run_energy(cfg); break;
            case ExperimentKind::blowup: art = run_blowup(cfg); break;
            case ExperimentKind::micromag: art = run_micromag(cfg); break;
            case ExperimentKind::picard_check: art = run_picard_check(cfg); break;
            }

            std::cout << "wrote " << cfg.out_dir << " (";
            if (!art.error_table.empty())
                std::cout << art.error_table.size() << " error rows";
            else if (!art.picard_traces.empty())
                std::cout << art.picard_traces.size() << " iteration traces";
            else
                std::cout << art.timeseries.size() << " series rows, " << art.snapshots.size()
                          << " snapshots";
            std::cout << ")\n";
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}

} // namespace llfv
