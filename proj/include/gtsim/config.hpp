#pragma once

// Flat `dotted.key = value` configuration files, environment overrides and
// the scenario presets used to build SimConfig instances.

#include "gtsim/engine.hpp"
#include "gtsim/metrics.hpp"

#include <array>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace gtsim {

/// Raw key/value pairs, keys lower-cased. Later assignments win.
using ConfigMap = std::map<std::string, std::string>;

inline constexpr std::string_view kEnvPrefix = "GTSIM_";

/// Parses `key = value` lines. `#` starts a comment; blank lines are ignored.
ConfigMap parse_config_text(std::string_view text);
ConfigMap load_config_file(const std::string& path);

/// Applies `GTSIM_<KEY>` variables, where `__` separates key components
/// (GTSIM_SUPERFRAME__BO=4 sets superframe.bo). `env` is a null-terminated
/// environ-style array.
void apply_env_overrides(ConfigMap& map, char** env);

/// Applies one `key=value` assignment.
void apply_assignment(ConfigMap& map, std::string_view assignment);

/// Maps a user-facing parameter name (full key or unique suffix such as
/// `mu_M`) to its canonical config key. Throws ConfigError when unknown.
std::string resolve_key(std::string_view name);

struct ScenarioPreset {
    int id = 0;
    int data_priority = 0;
    int rate_priority = 0;
};

/// The five (P_d, P_r) pairs of the scenario table.
const std::array<ScenarioPreset, 5>& scenario_presets();

/// Sets a device's data-priority markers, base importance and initial rate
/// so that it sits permanently at the preset's priorities.
void apply_scenario(DeviceSpec& device, const ScenarioPreset& preset);

struct Experiment {
    SimConfig sim;
    int n_heavy = 0;
    BandwidthMode bandwidth = BandwidthMode::Allocated;
};

/// Validates every key and builds the experiment. Throws ConfigError.
Experiment build_experiment(const ConfigMap& map);

/// Spreads `n_heavy` heavy devices evenly over `n` positions.
std::vector<bool> heavy_layout(int n, int n_heavy);

} // namespace gtsim
