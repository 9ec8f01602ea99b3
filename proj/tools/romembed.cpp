#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "romembed/romembed.hpp"

namespace {

using romembed::ExperimentConfig;

struct Common {
    std::string config, out, stage;
    int n = 0;
    std::vector<int> ns;
};

ExperimentConfig load(const Common& c)
{
    ExperimentConfig cfg;
    try {
        cfg = c.config.empty() ? ExperimentConfig{} : ExperimentConfig::from_json(romembed::io::read_json(c.config));
    } catch (const std::exception& e) {
        throw romembed::StageError("config", e.what());
    }
    if (!c.out.empty()) cfg.out = c.out;
    if (c.n > 0) cfg.n = c.n;
    return cfg;
}

void print_metrics(const romembed::Metrics& m)
{
    std::cout << m.to_json().dump(2) << '\n';
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Reduced-order-model embedding of 1D impedance data"};
    app.require_subcommand(1);
    Common c;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", c.config, "JSON experiment config");
        sub->add_option("--out", c.out, "output directory (overrides the config)");
        sub->add_option("--n", c.n, "number of pole-residue pairs");
    };

    std::vector<CLI::App*> stage_cmds;
    for (const auto& name : romembed::stage_names()) {
        auto* sub = app.add_subcommand(name, "run the '" + name + "' stage, reading inputs from --out");
        add_common(sub);
        stage_cmds.push_back(sub);
    }
    auto* run = app.add_subcommand("run", "run the configured stage chain");
    add_common(run);
    run->add_option("--stage", c.stage, "stop after this stage");
    auto* sweep = app.add_subcommand("sweep", "run the chain for several n");
    sweep->add_option("--config", c.config, "JSON experiment config");
    sweep->add_option("--out", c.out, "output directory");
    sweep->add_option("--n", c.ns, "values of n (repeatable); defaults to sweep_n of the config");

    CLI11_PARSE(app, argc, argv);

    try {
        ExperimentConfig cfg = load(c);
        if (run->parsed()) {
            if (!c.stage.empty()) {
                auto it = std::find(cfg.stages.begin(), cfg.stages.end(), c.stage);
                if (it == cfg.stages.end()) throw romembed::StageError(c.stage, "not in the configured stage list");
                cfg.stages.erase(it + 1, cfg.stages.end());
            }
            print_metrics(romembed::run(cfg));
        } else if (sweep->parsed()) {
            std::vector<int> ns = c.ns.empty() ? cfg.sweep_n : c.ns;
            int failed = 0;
            std::cout << "n,l1_velocity,l1_mass,runtime_ms\n";
            for (auto& r : romembed::sweep(cfg, ns)) {
                std::cout << r.n << ',' << romembed::io::num(r.l1_velocity) << ',' << romembed::io::num(r.l1_mass)
                          << ',' << romembed::io::num(r.runtime_ms) << '\n';
                if (!r.error.empty()) {
                    std::cerr << "n=" << r.n << ": " << r.error << '\n';
                    ++failed;
                }
            }
            return failed ? 1 : 0;
        } else {
            for (auto* sub : stage_cmds)
                if (sub->parsed()) cfg.stages = {sub->get_name()};
            print_metrics(romembed::run(cfg));
        }
    } catch (const romembed::StageError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
