#pragma once

// Result rows, CSV output, and the run/compare/sweep experiment drivers.

#include "gtsim/config.hpp"
#include "gtsim/engine.hpp"
#include "gtsim/metrics.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace gtsim {

struct ResultRow {
    std::string param; // sweep only
    std::string value; // sweep only
    std::string scheme;
    std::string scenario = "all";
    int n_heavy = 0;
    double gamma = 0.0;
    std::uint64_t seed = 0;
    Summary summary;
    std::optional<std::string> error;
};

/// Column order: scheme, scenario, n_heavy, gamma, seed, success_prob,
/// avg_delay_s, avg_wait_s, bandwidth_util, frames_generated,
/// frames_delivered, frames_dropped. Sweep output prepends param, value.
std::string csv_header(bool with_param);
std::string csv_row(const ResultRow& row, bool with_param);
std::string format_csv(std::span<const ResultRow> rows, bool with_param);

/// One "all" row for the whole PAN, plus one row per scenario label present
/// when `by_scenario` is set. Scenario rows use that group's own offered load.
std::vector<ResultRow> summarize_run(const Experiment& experiment, const SimResult& result, bool by_scenario);

struct CompareOptions {
    std::vector<SchemeKind> schemes{SchemeKind::Fcfs, SchemeKind::ArtGas};
    std::vector<int> loads{0, 5, 10, 15, 20};
    std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5};
    bool by_scenario = false;
    unsigned threads = 0; // 0 = hardware concurrency
};

/// Runs every (scheme, N_h, seed) cell. Seeds are paired across schemes.
/// A failing cell yields an error row; rows come back sorted by
/// (scheme, N_h, seed, scenario).
std::vector<ResultRow> compare(const ConfigMap& base, const CompareOptions& options);

struct SweepOptions {
    std::string param;
    std::vector<std::string> values;
    std::vector<std::uint64_t> seeds{1};
    bool by_scenario = false;
    unsigned threads = 0;
};

/// Runs the base config with `param` set to each value, for each seed.
std::vector<ResultRow> sweep(const ConfigMap& base, const SweepOptions& options);

/// "1..5" or "1,2,7".
std::vector<std::uint64_t> parse_seed_list(std::string_view text);
std::vector<int> parse_int_list(std::string_view text);
std::vector<std::string> parse_value_list(std::string_view text);

} // namespace gtsim
