// Command-line front end: run / compare / sweep.

#include "gtsim/config.hpp"
#include "gtsim/error.hpp"
#include "gtsim/report.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

extern char** environ;

namespace {

constexpr int kExitConfigError = 2;

gtsim::ConfigMap load_base(const std::string& path, const std::vector<std::string>& assignments)
{
    gtsim::ConfigMap map = path.empty() ? gtsim::ConfigMap{} : gtsim::load_config_file(path);
    gtsim::apply_env_overrides(map, environ);
    for (const auto& a : assignments) {
        gtsim::apply_assignment(map, a);
    }
    return map;
}

void write_output(const std::string& path, const std::string& text)
{
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot write '" + path + "'");
    }
    out << text;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"IEEE 802.15.4 GTS allocation simulator (FCFS vs ART-GAS)"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_path;
    std::vector<std::string> assignments;
    bool by_scenario = false;
    unsigned threads = 0;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--config", config_path, "flat key = value config file");
        cmd->add_option("--out", out_path, "CSV output path ('-' for stdout)");
        cmd->add_option("--set", assignments, "override a config key (key=value), repeatable");
        cmd->add_flag("--by-scenario", by_scenario, "add one row per scenario group");
    };

    auto* run_cmd = app.add_subcommand("run", "run one simulation");
    add_common(run_cmd);
    std::string scheme;
    std::string seed;
    std::string superframes;
    run_cmd->add_option("--scheme", scheme, "fcfs or artgas");
    run_cmd->add_option("--seed", seed, "master seed");
    run_cmd->add_option("--superframes", superframes, "number of superframes to simulate");

    auto* compare_cmd = app.add_subcommand("compare", "paired-seed scheme comparison over heavy-device counts");
    add_common(compare_cmd);
    std::string loads = "0,5,10,15,20";
    std::string seeds = "1..5";
    std::string schemes = "fcfs,artgas";
    compare_cmd->add_option("--loads", loads, "heavy-device counts N_h");
    compare_cmd->add_option("--seeds", seeds, "seed list or range, e.g. 1..5");
    compare_cmd->add_option("--schemes", schemes, "schemes to compare");
    compare_cmd->add_option("--superframes", superframes, "number of superframes per run");
    compare_cmd->add_option("--threads", threads, "worker threads (0 = all cores)");

    auto* sweep_cmd = app.add_subcommand("sweep", "vary one config parameter");
    add_common(sweep_cmd);
    std::string param;
    std::string values;
    std::string sweep_seeds = "1";
    sweep_cmd->add_option("--param", param, "config key or unique suffix (e.g. mu_M)")->required();
    sweep_cmd->add_option("--values", values, "comma-separated values")->required();
    sweep_cmd->add_option("--seeds", sweep_seeds, "seed list or range");
    sweep_cmd->add_option("--scheme", scheme, "fcfs or artgas");
    sweep_cmd->add_option("--superframes", superframes, "number of superframes per run");
    sweep_cmd->add_option("--threads", threads, "worker threads (0 = all cores)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitConfigError;
    }

    try {
        auto map = load_base(config_path, assignments);
        if (!scheme.empty()) {
            map["scheme"] = scheme;
        }
        if (!superframes.empty()) {
            map["superframes"] = superframes;
        }

        if (*run_cmd) {
            if (!seed.empty()) {
                map["seed"] = seed;
            }
            const auto experiment = gtsim::build_experiment(map);
            const auto result = gtsim::run(experiment.sim);
            const auto rows = gtsim::summarize_run(experiment, result, by_scenario);
            write_output(out_path, gtsim::format_csv(rows, false));
        } else if (*compare_cmd) {
            gtsim::build_experiment(map); // surface config errors before fanning out
            gtsim::CompareOptions options;
            options.loads = gtsim::parse_int_list(loads);
            options.seeds = gtsim::parse_seed_list(seeds);
            options.schemes.clear();
            for (const auto& s : gtsim::parse_value_list(schemes)) {
                const auto kind = gtsim::parse_scheme(s);
                if (!kind) {
                    throw gtsim::ConfigError("unknown scheme '" + s + "'");
                }
                options.schemes.push_back(*kind);
            }
            options.by_scenario = by_scenario;
            options.threads = threads;
            write_output(out_path, gtsim::format_csv(gtsim::compare(map, options), false));
        } else if (*sweep_cmd) {
            gtsim::build_experiment(map);
            gtsim::SweepOptions options;
            options.param = param;
            options.values = gtsim::parse_value_list(values);
            options.seeds = gtsim::parse_seed_list(sweep_seeds);
            options.by_scenario = by_scenario;
            options.threads = threads;
            write_output(out_path, gtsim::format_csv(gtsim::sweep(map, options), true));
        }
    } catch (const gtsim::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfigError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
