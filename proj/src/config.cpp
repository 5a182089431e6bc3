#include "gtsim/config.hpp"

#include "gtsim/error.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

namespace gtsim {

namespace {

std::string lower(std::string_view s)
{
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    }
    return out;
}

std::string_view trim(std::string_view s)
{
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

// Keys accepted at top level. Per-device keys are `device.<i>.<field>`.
const std::set<std::string>& global_keys()
{
    static const std::set<std::string> keys = {
        "scheme",
        "seed",
        "superframes",
        "superframe.bo",
        "superframe.so",
        "superframe.symbol_rate",
        "superframe.base_symbols",
        "superframe.min_cap_symbols",
        "phy.data_rate_bps",
        "traffic.chi_h",
        "traffic.chi_l",
        "traffic.frame_bytes",
        "traffic.buffer",
        "traffic.arrivals",
        "devices.count",
        "devices.n_heavy",
        "devices.scenarios",
        "devices.initial_rate",
        "devices.base_importance",
        "devices.realtime_prob",
        "devices.exception_prob",
        "devices.distance_mm",
        "priority.lambda_csma_miss",
        "priority.lambda_gts_miss",
        "priority.lambda_csma_hit",
        "priority.lambda_gts_hit",
        "priority.hit_exponent_cap",
        "priority.rate_floor",
        "priority.rate_ceiling",
        "artgas.mu_m",
        "artgas.mu_l",
        "artgas.delta",
        "artgas.idle_limit",
        "artgas.slot_order",
        "cap.mode",
        "cap.success_prob",
        "cap.backoff_exponent",
        "channel.coeff_d",
        "channel.coeff_f",
        "channel.offset",
        "channel.shadow_sigma_db",
        "channel.frequency",
        "channel.tx_power_dbm",
        "channel.sensitivity_dbm",
        "channel.generic_a",
        "channel.generic_b",
        "channel.generic_c",
        "metrics.bandwidth",
    };
    return keys;
}

const std::set<std::string>& device_fields()
{
    static const std::set<std::string> fields = {
        "class",          "rate",           "base_importance", "initial_rate", "realtime_prob",
        "exception_prob", "distance_mm",    "scenario",        "phase_s",      "active_until_s",
        "arrivals",       "buffer",
    };
    return fields;
}

bool is_device_key(const std::string& key, std::size_t* index = nullptr, std::string* field = nullptr)
{
    if (key.rfind("device.", 0) != 0) {
        return false;
    }
    const auto rest = std::string_view(key).substr(7);
    const auto dot = rest.find('.');
    if (dot == std::string_view::npos || dot == 0) {
        return false;
    }
    std::size_t i = 0;
    const auto num = rest.substr(0, dot);
    auto [ptr, ec] = std::from_chars(num.data(), num.data() + num.size(), i);
    if (ec != std::errc{} || ptr != num.data() + num.size()) {
        return false;
    }
    const std::string f(rest.substr(dot + 1));
    if (!device_fields().count(f)) {
        return false;
    }
    if (index) {
        *index = i;
    }
    if (field) {
        *field = f;
    }
    return true;
}

void check_key(const std::string& key)
{
    if (!global_keys().count(key) && !is_device_key(key)) {
        throw ConfigError("unknown config key '" + key + "'");
    }
}

class Reader {
public:
    explicit Reader(const ConfigMap& map) : map_(map) {}

    const std::string* raw(const std::string& key) const
    {
        auto it = map_.find(key);
        return it == map_.end() ? nullptr : &it->second;
    }

    double real(const std::string& key, double fallback) const
    {
        const auto* v = raw(key);
        if (!v) {
            return fallback;
        }
        double out = 0.0;
        auto [ptr, ec] = std::from_chars(v->data(), v->data() + v->size(), out);
        if (ec != std::errc{} || ptr != v->data() + v->size() || !std::isfinite(out)) {
            throw ConfigError("'" + key + "' expects a number, got '" + *v + "'");
        }
        return out;
    }

    long long integer(const std::string& key, long long fallback) const
    {
        const auto* v = raw(key);
        if (!v) {
            return fallback;
        }
        long long out = 0;
        auto [ptr, ec] = std::from_chars(v->data(), v->data() + v->size(), out);
        if (ec != std::errc{} || ptr != v->data() + v->size()) {
            throw ConfigError("'" + key + "' expects an integer, got '" + *v + "'");
        }
        return out;
    }

    std::string text(const std::string& key, std::string fallback) const
    {
        const auto* v = raw(key);
        return v ? lower(*v) : fallback;
    }

private:
    const ConfigMap& map_;
};

} // namespace

ConfigMap parse_config_text(std::string_view text)
{
    ConfigMap map;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        auto end = text.find('\n', pos);
        if (end == std::string_view::npos) {
            end = text.size();
        }
        auto line = text.substr(pos, end - pos);
        pos = end + 1;
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string_view::npos) {
            line = line.substr(0, hash);
        }
        line = trim(line);
        if (line.empty()) {
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw ConfigError("line " + std::to_string(line_no) + ": expected 'key = value'");
        }
        const auto key = lower(trim(line.substr(0, eq)));
        const auto value = std::string(trim(line.substr(eq + 1)));
        if (key.empty() || value.empty()) {
            throw ConfigError("line " + std::to_string(line_no) + ": empty key or value");
        }
        try {
            check_key(key);
        } catch (const ConfigError& e) {
            throw ConfigError("line " + std::to_string(line_no) + ": " + e.what());
        }
        map[key] = value;
    }
    return map;
}

ConfigMap load_config_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ConfigError("cannot open config file '" + path + "'");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str());
}

void apply_assignment(ConfigMap& map, std::string_view assignment)
{
    const auto eq = assignment.find('=');
    if (eq == std::string_view::npos) {
        throw ConfigError("expected key=value, got '" + std::string(assignment) + "'");
    }
    const auto key = resolve_key(trim(assignment.substr(0, eq)));
    const auto value = std::string(trim(assignment.substr(eq + 1)));
    if (value.empty()) {
        throw ConfigError("empty value for '" + key + "'");
    }
    map[key] = value;
}

void apply_env_overrides(ConfigMap& map, char** env)
{
    if (!env) {
        return;
    }
    for (char** e = env; *e; ++e) {
        std::string_view entry(*e);
        if (entry.rfind(kEnvPrefix, 0) != 0) {
            continue;
        }
        const auto eq = entry.find('=');
        if (eq == std::string_view::npos) {
            continue;
        }
        std::string key = lower(entry.substr(kEnvPrefix.size(), eq - kEnvPrefix.size()));
        for (std::size_t p = key.find("__"); p != std::string::npos; p = key.find("__", p + 1)) {
            key.replace(p, 2, ".");
        }
        check_key(key);
        map[key] = std::string(entry.substr(eq + 1));
    }
}

std::string resolve_key(std::string_view name)
{
    const std::string key = lower(trim(name));
    if (global_keys().count(key) || is_device_key(key)) {
        return key;
    }
    std::string match;
    for (const auto& k : global_keys()) {
        const auto dot = k.rfind('.');
        if (dot != std::string::npos && k.compare(dot + 1, std::string::npos, key) == 0) {
            if (!match.empty()) {
                throw ConfigError("ambiguous parameter '" + std::string(name) + "'");
            }
            match = k;
        }
    }
    if (match.empty()) {
        throw ConfigError("unknown parameter '" + std::string(name) + "'");
    }
    return match;
}

const std::array<ScenarioPreset, 5>& scenario_presets()
{
    static const std::array<ScenarioPreset, 5> presets = {{
        {1, 5, 10},
        {2, 10, 10},
        {3, 25, 15},
        {4, 25, 20},
        {5, 50, 10},
    }};
    return presets;
}

void apply_scenario(DeviceSpec& device, const ScenarioPreset& preset)
{
    const auto data = DataPriority::from_number(preset.data_priority);
    device.scenario = preset.id;
    device.base_importance = data.base_importance();
    device.initial_rate = preset.rate_priority;
    switch (data.state()) {
    case DataState::Low:
        device.realtime_prob = 0.0;
        device.exception_prob = 0.0;
        break;
    case DataState::Middle:
        device.realtime_prob = 1.0;
        device.exception_prob = 0.0;
        break;
    case DataState::High:
        device.realtime_prob = 1.0;
        device.exception_prob = 1.0;
        break;
    }
}

std::vector<bool> heavy_layout(int n, int n_heavy)
{
    if (n < 0 || n_heavy < 0 || n_heavy > n) {
        throw ConfigError("need 0 <= devices.n_heavy <= devices.count");
    }
    std::vector<bool> heavy(static_cast<std::size_t>(n), false);
    for (int i = 0; i < n; ++i) {
        // device i is heavy when the running quota crosses an integer
        heavy[i] = ((i + 1) * n_heavy) / n > (i * n_heavy) / n;
    }
    return heavy;
}

Experiment build_experiment(const ConfigMap& map)
{
    for (const auto& [key, value] : map) {
        check_key(key);
    }
    const Reader r(map);
    Experiment ex;
    SimConfig& c = ex.sim;

    if (const auto* s = r.raw("scheme")) {
        const auto kind = parse_scheme(*s);
        if (!kind) {
            throw ConfigError("unknown scheme '" + *s + "'");
        }
        c.scheme = *kind;
    }
    const auto seed = r.integer("seed", 1);
    if (seed < 0) {
        throw ConfigError("seed must be non-negative");
    }
    c.seed = static_cast<std::uint64_t>(seed);
    c.duration_superframes = r.integer("superframes", 1000);

    c.superframe.beacon_order = static_cast<int>(r.integer("superframe.bo", 3));
    c.superframe.superframe_order = static_cast<int>(r.integer("superframe.so", c.superframe.beacon_order));
    c.superframe.symbol_rate = r.real("superframe.symbol_rate", 62500.0);
    c.superframe.base_superframe_symbols = r.integer("superframe.base_symbols", 960);
    c.superframe.min_cap_symbols = r.integer("superframe.min_cap_symbols", 440);
    c.data_rate_bps = r.real("phy.data_rate_bps", 200000.0);

    c.rate.lambda_csma_miss = r.real("priority.lambda_csma_miss", 1.0);
    c.rate.lambda_gts_miss = r.real("priority.lambda_gts_miss", 1.0);
    c.rate.lambda_csma_hit = r.real("priority.lambda_csma_hit", 1.0);
    c.rate.lambda_gts_hit = r.real("priority.lambda_gts_hit", 1.0);
    c.rate.hit_exponent_cap = static_cast<int>(r.integer("priority.hit_exponent_cap", 16));
    c.rate_floor = r.real("priority.rate_floor", 1.0);
    c.rate_ceiling = r.real("priority.rate_ceiling", 59.0);

    c.thresholds.mu_middle = r.real("artgas.mu_m", 0.4);
    c.thresholds.mu_low = r.real("artgas.mu_l", 0.6);
    c.thresholds.delta = r.real("artgas.delta", 0.9);
    c.artgas_idle_limit = static_cast<int>(r.integer("artgas.idle_limit", 1));
    const auto slot_order = parse_slot_order(r.text("artgas.slot_order", "priority"));
    if (!slot_order) {
        throw ConfigError("artgas.slot_order must be 'priority' or 'grant'");
    }
    c.artgas_slot_order = *slot_order;

    const auto cap_mode = r.text("cap.mode", "ideal");
    if (auto m = parse_cap_mode(cap_mode)) {
        c.cap.mode = *m;
    } else {
        throw ConfigError("unknown cap.mode '" + cap_mode + "'");
    }
    c.cap.success_prob = r.real("cap.success_prob", 1.0);
    c.backoff_exponent = static_cast<int>(r.integer("cap.backoff_exponent", 3));

    auto& pl = c.channel.path_loss;
    pl.coeff_d = r.real("channel.coeff_d", -27.6);
    pl.coeff_f = r.real("channel.coeff_f", -46.5);
    pl.offset = r.real("channel.offset", 157.0);
    pl.shadow_sigma_db = r.real("channel.shadow_sigma_db", 4.12);
    if (r.raw("channel.generic_a") || r.raw("channel.generic_b") || r.raw("channel.generic_c")) {
        pl.generic = PathLossParams::Generic{r.real("channel.generic_a", 0.0), r.real("channel.generic_b", 0.0),
                                             r.real("channel.generic_c", 0.0)};
    }
    c.channel.frequency = r.real("channel.frequency", 2400.0);
    c.channel.budget.tx_power_dbm = r.real("channel.tx_power_dbm", 0.0);
    c.channel.budget.sensitivity_dbm = r.real("channel.sensitivity_dbm", -85.0);

    const auto bw = r.text("metrics.bandwidth", "allocated");
    if (bw == "allocated") {
        ex.bandwidth = BandwidthMode::Allocated;
    } else if (bw == "total") {
        ex.bandwidth = BandwidthMode::Total;
    } else {
        throw ConfigError("metrics.bandwidth must be 'allocated' or 'total'");
    }

    // devices
    const auto count = r.integer("devices.count", 20);
    if (count < 1 || count > 100000) {
        throw ConfigError("devices.count must lie in 1..100000");
    }
    const int n = static_cast<int>(count);
    const auto n_heavy = r.integer("devices.n_heavy", 5);
    if (n_heavy < 0 || n_heavy > n) {
        throw ConfigError("need 0 <= devices.n_heavy <= devices.count");
    }
    ex.n_heavy = static_cast<int>(n_heavy);
    const double chi_h = r.real("traffic.chi_h", kHeavyRate);
    const double chi_l = r.real("traffic.chi_l", kLightRate);
    const int frame_bytes = static_cast<int>(r.integer("traffic.frame_bytes", kMaxFrameBytes));
    const auto buffer = r.integer("traffic.buffer", 150);
    if (buffer < 1) {
        throw ConfigError("traffic.buffer must be at least 1");
    }
    const auto parse_arrivals = [](const std::string& key, const std::string& v) {
        if (v == "poisson") {
            return ArrivalMode::Poisson;
        }
        if (v == "periodic") {
            return ArrivalMode::Periodic;
        }
        throw ConfigError("'" + key + "' must be 'poisson' or 'periodic'");
    };
    const auto arrivals = parse_arrivals("traffic.arrivals", r.text("traffic.arrivals", "poisson"));
    const auto scenarios = r.text("devices.scenarios", "none");
    if (scenarios != "none" && scenarios != "table2") {
        throw ConfigError("devices.scenarios must be 'none' or 'table2'");
    }

    const auto heavy = heavy_layout(n, ex.n_heavy);
    c.devices.assign(static_cast<std::size_t>(n), DeviceSpec{});
    for (int i = 0; i < n; ++i) {
        auto& d = c.devices[i];
        d.traffic.cls = heavy[i] ? TrafficClass::Heavy : TrafficClass::Light;
        d.traffic.rate = heavy[i] ? chi_h : chi_l;
        d.traffic.frame_bytes = frame_bytes;
        d.buffer_frames = static_cast<std::size_t>(buffer);
        d.arrival_mode = arrivals;
        d.initial_rate = r.real("devices.initial_rate", 10.0);
        d.base_importance = static_cast<int>(r.integer("devices.base_importance", 0));
        d.realtime_prob = r.real("devices.realtime_prob", 0.0);
        d.exception_prob = r.real("devices.exception_prob", 0.0);
        d.distance_mm = r.real("devices.distance_mm", 500.0);
        if (scenarios == "table2") {
            const auto& presets = scenario_presets();
            apply_scenario(d, presets[static_cast<std::size_t>(i) * presets.size() / static_cast<std::size_t>(n)]);
        }
    }

    // per-device overrides, applied in key order; scenario first so that
    // explicit fields can refine it
    std::vector<std::pair<std::size_t, std::string>> scenario_keys;
    for (const auto& [key, value] : map) {
        std::size_t i = 0;
        std::string field;
        if (!is_device_key(key, &i, &field)) {
            continue;
        }
        if (i >= c.devices.size()) {
            throw ConfigError("'" + key + "' refers to a device beyond devices.count");
        }
        if (field == "scenario") {
            const auto id = r.integer(key, 0);
            if (id < 1 || id > static_cast<long long>(scenario_presets().size())) {
                throw ConfigError("'" + key + "' must name a scenario in 1..5");
            }
            apply_scenario(c.devices[i], scenario_presets()[static_cast<std::size_t>(id - 1)]);
        }
    }
    for (const auto& [key, value] : map) {
        std::size_t i = 0;
        std::string field;
        if (!is_device_key(key, &i, &field) || field == "scenario") {
            continue;
        }
        auto& d = c.devices[i];
        if (field == "class") {
            const auto cls = parse_traffic_class(value);
            if (!cls) {
                throw ConfigError("'" + key + "' must be 'heavy' or 'light'");
            }
            d.traffic.cls = *cls;
            if (!map.count("device." + std::to_string(i) + ".rate")) {
                d.traffic.rate = *cls == TrafficClass::Heavy ? chi_h : chi_l;
            }
        } else if (field == "rate") {
            d.traffic.rate = r.real(key, d.traffic.rate);
        } else if (field == "base_importance") {
            d.base_importance = static_cast<int>(r.integer(key, d.base_importance));
        } else if (field == "initial_rate") {
            d.initial_rate = r.real(key, d.initial_rate);
        } else if (field == "realtime_prob") {
            d.realtime_prob = r.real(key, d.realtime_prob);
        } else if (field == "exception_prob") {
            d.exception_prob = r.real(key, d.exception_prob);
        } else if (field == "distance_mm") {
            d.distance_mm = r.real(key, d.distance_mm);
        } else if (field == "phase_s") {
            d.phase_s = r.real(key, 0.0);
        } else if (field == "active_until_s") {
            d.active_until_s = r.real(key, d.active_until_s);
        } else if (field == "arrivals") {
            d.arrival_mode = parse_arrivals(key, lower(value));
        } else if (field == "buffer") {
            const auto b = r.integer(key, 150);
            if (b < 1) {
                throw ConfigError("'" + key + "' must be at least 1");
            }
            d.buffer_frames = static_cast<std::size_t>(b);
        }
    }

    ex.n_heavy = static_cast<int>(std::count_if(c.devices.begin(), c.devices.end(), [](const DeviceSpec& d) {
        return d.traffic.cls == TrafficClass::Heavy;
    }));
    c.validate();
    return ex;
}

} // namespace gtsim
