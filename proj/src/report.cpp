#include "gtsim/report.hpp"

#include "gtsim/error.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cstdio>
#include <functional>
#include <map>
#include <sstream>
#include <thread>
#include <tuple>

namespace gtsim {

namespace {

std::string number(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

std::string optional_number(const std::optional<double>& v)
{
    return v ? number(*v) : "null";
}

std::string quoted(const std::string& s)
{
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') {
            out += "\"\"";
        } else if (c == '\n' || c == '\r') {
            out += ' ';
        } else {
            out += c;
        }
    }
    return out + "\"";
}

int scenario_rank(const std::string& scenario)
{
    if (scenario == "all") {
        return -1;
    }
    int v = 0;
    std::from_chars(scenario.data(), scenario.data() + scenario.size(), v);
    return v;
}

/// Runs `count` independent jobs on a small pool; job i writes only slot i.
void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& job)
{
    unsigned workers = threads ? threads : std::max(1u, std::thread::hardware_concurrency());
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, count));
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) {
            job(i);
        }
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < count; i = next++) {
                job(i);
            }
        });
    }
}

std::vector<ResultRow> run_cell(const ConfigMap& map, const ResultRow& prototype, bool by_scenario)
{
    try {
        const auto experiment = build_experiment(map);
        const auto result = run(experiment.sim);
        auto rows = summarize_run(experiment, result, by_scenario);
        for (auto& r : rows) {
            r.param = prototype.param;
            r.value = prototype.value;
        }
        return rows;
    } catch (const std::exception& e) {
        ResultRow row = prototype;
        row.error = e.what();
        return {row};
    }
}

} // namespace

std::string csv_header(bool with_param)
{
    std::string h = with_param ? "param,value," : "";
    return h + "scheme,scenario,n_heavy,gamma,seed,success_prob,avg_delay_s,avg_wait_s,bandwidth_util,"
               "frames_generated,frames_delivered,frames_dropped";
}

std::string csv_row(const ResultRow& row, bool with_param)
{
    std::ostringstream out;
    if (with_param) {
        out << row.param << ',' << row.value << ',';
    }
    out << row.scheme << ',' << row.scenario << ',' << row.n_heavy << ',' << number(row.gamma) << ','
        << row.seed << ',';
    if (row.error) {
        out << quoted("error: " + *row.error) << ",,,,,,";
        return out.str();
    }
    const auto& s = row.summary;
    out << number(s.success_prob) << ',' << optional_number(s.avg_delay_s) << ','
        << optional_number(s.avg_wait_s) << ',' << optional_number(s.bandwidth_util) << ','
        << s.frames_generated << ',' << s.frames_delivered << ',' << s.frames_dropped;
    return out.str();
}

std::string format_csv(std::span<const ResultRow> rows, bool with_param)
{
    std::string out = csv_header(with_param) + "\n";
    for (const auto& r : rows) {
        out += csv_row(r, with_param) + "\n";
    }
    return out;
}

std::vector<ResultRow> summarize_run(const Experiment& experiment, const SimResult& result, bool by_scenario)
{
    const auto& sim = experiment.sim;
    const auto& ledger = result.ledger;
    std::vector<ResultRow> rows;

    ResultRow all;
    all.scheme = std::string(to_string(sim.scheme));
    all.n_heavy = experiment.n_heavy;
    all.gamma = result.gamma;
    all.seed = sim.seed;
    all.summary = summarize(ledger, result.gamma, experiment.bandwidth);
    rows.push_back(all);

    if (by_scenario) {
        std::map<int, std::vector<DeviceId>> groups;
        std::map<int, double> loads;
        for (DeviceId id = 0; id < sim.devices.size(); ++id) {
            const auto& d = sim.devices[id];
            if (d.scenario > 0) {
                groups[d.scenario].push_back(id);
                loads[d.scenario] += d.traffic.rate;
            }
        }
        for (const auto& [scenario, ids] : groups) {
            ResultRow row = all;
            row.scenario = std::to_string(scenario);
            row.gamma = loads[scenario];
            row.summary = summarize(ledger.aggregate(ids), row.gamma, ledger.horizon_s(), ledger.superframes(),
                                    experiment.bandwidth);
            rows.push_back(row);
        }
    }
    return rows;
}

std::vector<ResultRow> compare(const ConfigMap& base, const CompareOptions& options)
{
    struct Cell {
        SchemeKind scheme;
        int n_heavy;
        std::uint64_t seed;
    };
    std::vector<Cell> cells;
    for (auto scheme : options.schemes) {
        for (int load : options.loads) {
            for (auto seed : options.seeds) {
                cells.push_back({scheme, load, seed});
            }
        }
    }
    std::vector<std::vector<ResultRow>> out(cells.size());
    parallel_for(cells.size(), options.threads, [&](std::size_t i) {
        const auto& cell = cells[i];
        ConfigMap map = base;
        map["scheme"] = std::string(to_string(cell.scheme));
        map["devices.n_heavy"] = std::to_string(cell.n_heavy);
        map["seed"] = std::to_string(cell.seed);
        ResultRow proto;
        proto.scheme = std::string(to_string(cell.scheme));
        proto.n_heavy = cell.n_heavy;
        proto.seed = cell.seed;
        out[i] = run_cell(map, proto, options.by_scenario);
    });

    std::vector<ResultRow> rows;
    for (auto& v : out) {
        rows.insert(rows.end(), v.begin(), v.end());
    }
    std::stable_sort(rows.begin(), rows.end(), [](const ResultRow& a, const ResultRow& b) {
        return std::make_tuple(a.scheme, a.n_heavy, a.seed, scenario_rank(a.scenario)) <
               std::make_tuple(b.scheme, b.n_heavy, b.seed, scenario_rank(b.scenario));
    });
    return rows;
}

std::vector<ResultRow> sweep(const ConfigMap& base, const SweepOptions& options)
{
    const std::string key = resolve_key(options.param);
    struct Cell {
        std::size_t value_index;
        std::uint64_t seed;
    };
    std::vector<Cell> cells;
    for (std::size_t v = 0; v < options.values.size(); ++v) {
        for (auto seed : options.seeds) {
            cells.push_back({v, seed});
        }
    }
    std::vector<std::vector<ResultRow>> out(cells.size());
    parallel_for(cells.size(), options.threads, [&](std::size_t i) {
        const auto& cell = cells[i];
        ConfigMap map = base;
        map[key] = options.values[cell.value_index];
        map["seed"] = std::to_string(cell.seed);
        ResultRow proto;
        proto.param = key;
        proto.value = options.values[cell.value_index];
        proto.seed = cell.seed;
        proto.scheme = "artgas";
        if (auto it = map.find("scheme"); it != map.end()) {
            proto.scheme = it->second;
        }
        out[i] = run_cell(map, proto, options.by_scenario);
    });
    std::vector<ResultRow> rows;
    for (auto& v : out) {
        rows.insert(rows.end(), v.begin(), v.end());
    }
    return rows;
}

namespace {

template <typename T>
T parse_one(std::string_view s)
{
    T v{};
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) {
        throw ConfigError("invalid number '" + std::string(s) + "'");
    }
    return v;
}

std::vector<std::string_view> split_commas(std::string_view text)
{
    std::vector<std::string_view> parts;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        auto end = text.find(',', pos);
        if (end == std::string_view::npos) {
            end = text.size();
        }
        auto part = text.substr(pos, end - pos);
        while (!part.empty() && part.front() == ' ') {
            part.remove_prefix(1);
        }
        while (!part.empty() && part.back() == ' ') {
            part.remove_suffix(1);
        }
        if (part.empty()) {
            throw ConfigError("empty list element in '" + std::string(text) + "'");
        }
        parts.push_back(part);
        pos = end + 1;
    }
    return parts;
}

} // namespace

std::vector<std::uint64_t> parse_seed_list(std::string_view text)
{
    std::vector<std::uint64_t> seeds;
    for (auto part : split_commas(text)) {
        if (auto dots = part.find(".."); dots != std::string_view::npos) {
            const auto lo = parse_one<std::uint64_t>(part.substr(0, dots));
            const auto hi = parse_one<std::uint64_t>(part.substr(dots + 2));
            if (hi < lo || hi - lo > 1000000) {
                throw ConfigError("bad seed range '" + std::string(part) + "'");
            }
            for (auto s = lo; s <= hi; ++s) {
                seeds.push_back(s);
            }
        } else {
            seeds.push_back(parse_one<std::uint64_t>(part));
        }
    }
    return seeds;
}

std::vector<int> parse_int_list(std::string_view text)
{
    std::vector<int> out;
    for (auto part : split_commas(text)) {
        out.push_back(parse_one<int>(part));
    }
    return out;
}

std::vector<std::string> parse_value_list(std::string_view text)
{
    std::vector<std::string> out;
    for (auto part : split_commas(text)) {
        out.emplace_back(part);
    }
    return out;
}

} // namespace gtsim
