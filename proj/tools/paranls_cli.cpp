// paranls command line front end.
#include <iostream>
#include <map>

#include <CLI11.hpp>

#include "paranls/errors.hpp"
#include "paranls/harness.hpp"

using namespace paranls;

int main(int argc, char** argv) {
    CLI::App app{"paradifferential NLS toolkit"};
    app.require_subcommand(1);
    std::string config_path, out_dir;
    uint64_t seed = 0;
    bool quick = false;

    using Cmd = RunOutput (*)(const ExperimentConfig&);
    const std::map<std::string, std::pair<Cmd, std::string>> verbs = {
        {"simulate", {cmd_simulate, "integrate one trajectory"}},
        {"lifespan-scan", {cmd_lifespan_scan, "doubling time against eps"}},
        {"resonance-scan", {cmd_resonance_scan, "small divisor scan"}},
        {"calculus-verify", {cmd_calculus_verify, "quantization and composition checks"}},
        {"paralinearize-check", {cmd_paralinearize_check, "paralinearization of the configured f"}},
        {"reduce-demo", {cmd_reduce_demo, "reduction pipeline defects"}},
        {"verify", {cmd_verify, "acceptance suite"}},
    };
    for (const auto& [name, v] : verbs) {
        CLI::App* sub = app.add_subcommand(name, v.second);
        sub->add_option("--config", config_path, "JSON config file");
        sub->add_option("--seed", seed, "seed override");
        sub->add_option("--out", out_dir, "output directory");
        sub->add_flag("--quick", quick, "reduced sizes");
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    ExperimentConfig cfg;
    try {
        if (!config_path.empty()) cfg = load_config(config_path);
        if (seed) cfg.seed = seed;
        if (!out_dir.empty()) cfg.out_dir = out_dir;
        if (quick) cfg.quick = true;
        if (cfg.quick && config_path.empty()) cfg.J = 32;
        cfg.resolved = resolve(cfg);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    }

    const std::string verb = app.get_subcommands().front()->get_name();
    try {
        RunOutput out = verbs.at(verb).first(cfg);
        std::cout << verb << ": " << (out.status == 0 ? "pass" : "fail") << " (config " << config_hash(cfg.resolved)
                  << ", " << cfg.out_dir << ")\n";
        return out.status == 0 ? 0 : 1;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << verb << " failed: " << e.what() << '\n';
        return 1;
    }
}
