#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "gtsim/config.hpp"
#include "gtsim/error.hpp"
#include "gtsim/report.hpp"

#include <algorithm>

using namespace gtsim;

TEST_CASE("config text parsing")
{
    const auto m = parse_config_text("# comment\nScheme = FCFS\n\n  superframe.bo=4  # trailing\nseed = 9\n");
    CHECK(m.at("scheme") == "FCFS");
    CHECK(m.at("superframe.bo") == "4");
    CHECK(m.at("seed") == "9");
    CHECK_THROWS_AS(parse_config_text("novalue\n"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("bogus.key = 1\n"), ConfigError);
    try {
        parse_config_text("seed = 1\nwhat = 2\n");
        FAIL("expected an error");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("line 2") != std::string::npos);
    }
}

TEST_CASE("environment and assignment overrides")
{
    ConfigMap m{{"superframe.bo", "3"}};
    std::string a = "GTSIM_SUPERFRAME__BO=5";
    std::string b = "GTSIM_SEED=11";
    std::string c = "PATH=/bin";
    char* env[] = {a.data(), b.data(), c.data(), nullptr};
    apply_env_overrides(m, env);
    CHECK(m.at("superframe.bo") == "5");
    CHECK(m.at("seed") == "11");
    apply_assignment(m, "mu_M=0.7");
    CHECK(m.at("artgas.mu_m") == "0.7");
    CHECK_THROWS_AS(apply_assignment(m, "nokey"), ConfigError);
    CHECK_THROWS_AS(resolve_key("nothing_like_this"), ConfigError);
    CHECK(resolve_key("delta") == "artgas.delta");
}

TEST_CASE("defaults build the reference experiment")
{
    const auto ex = build_experiment({});
    CHECK(ex.sim.devices.size() == 20);
    CHECK(ex.n_heavy == 5);
    CHECK(ex.sim.superframe.beacon_order == 3);
    CHECK(ex.sim.superframe.superframe_order == 3);
    CHECK(ex.sim.data_rate_bps == 200000.0);
    double gamma = 0.0;
    int heavy = 0;
    for (const auto& d : ex.sim.devices) {
        gamma += d.traffic.rate;
        heavy += d.traffic.cls == TrafficClass::Heavy;
        CHECK(d.buffer_frames == 150);
        CHECK(d.traffic.frame_bytes == 127);
    }
    CHECK(heavy == 5);
    CHECK(gamma == doctest::Approx(4.0));
}

TEST_CASE("bad values are config errors")
{
    CHECK_THROWS_AS(build_experiment({{"devices.n_heavy", "21"}}), ConfigError);
    CHECK_THROWS_AS(build_experiment({{"superframe.bo", "2"}, {"superframe.so", "3"}}), ConfigError);
    CHECK_THROWS_AS(build_experiment({{"superframes", "0"}}), ConfigError);
    CHECK_THROWS_AS(build_experiment({{"scheme", "edf"}}), ConfigError);
    CHECK_THROWS_AS(build_experiment({{"seed", "abc"}}), ConfigError);
    CHECK_THROWS_AS(build_experiment({{"device.25.class", "heavy"}}), ConfigError);
    CHECK_THROWS_AS(build_experiment({{"traffic.frame_bytes", "200"}}), ConfigError);
    CHECK_THROWS_AS(build_experiment({{"artgas.slot_order", "random"}}), ConfigError);
}

TEST_CASE("heavy layout spreads heavy devices")
{
    for (int n = 1; n <= 30; ++n) {
        for (int h = 0; h <= n; ++h) {
            const auto layout = heavy_layout(n, h);
            CHECK(std::count(layout.begin(), layout.end(), true) == h);
        }
    }
    const auto five = heavy_layout(20, 5);
    for (int g = 0; g < 5; ++g) {
        CHECK(std::count(five.begin() + 4 * g, five.begin() + 4 * g + 4, true) == 1);
    }
    CHECK_THROWS_AS(heavy_layout(4, 5), ConfigError);
}

TEST_CASE("scenario presets")
{
    const auto& p = scenario_presets();
    CHECK(p[0].data_priority == 5);
    CHECK(p[0].rate_priority == 10);
    CHECK(p[4].data_priority == 50);
    CHECK(p[4].rate_priority == 10);

    const auto ex = build_experiment({{"devices.scenarios", "table2"}});
    for (std::size_t i = 0; i < ex.sim.devices.size(); ++i) {
        const auto& d = ex.sim.devices[i];
        const auto& preset = p[i / 4];
        CHECK(d.scenario == preset.id);
        CHECK(d.initial_rate == preset.rate_priority);
        CHECK(d.base_importance == preset.data_priority % 20);
        const int state = preset.data_priority / 20;
        CHECK(d.realtime_prob == (state >= 1 ? 1.0 : 0.0));
        CHECK(d.exception_prob == (state == 2 ? 1.0 : 0.0));
    }
}

TEST_CASE("per-device keys refine the scenario")
{
    const auto ex = build_experiment({{"device.3.scenario", "4"}, {"device.3.initial_rate", "30"},
                                      {"device.0.class", "heavy"}, {"device.0.arrivals", "periodic"},
                                      {"device.0.phase_s", "0.5"}});
    CHECK(ex.sim.devices[3].scenario == 4);
    CHECK(ex.sim.devices[3].initial_rate == 30.0);
    CHECK(ex.sim.devices[0].traffic.cls == TrafficClass::Heavy);
    CHECK(ex.sim.devices[0].traffic.rate == kHeavyRate);
    CHECK(ex.sim.devices[0].arrival_mode == ArrivalMode::Periodic);
    CHECK(ex.sim.devices[0].phase_s == 0.5);
}

TEST_CASE("list parsers")
{
    CHECK(parse_seed_list("1..5") == std::vector<std::uint64_t>{1, 2, 3, 4, 5});
    CHECK(parse_seed_list("3,1") == std::vector<std::uint64_t>{3, 1});
    CHECK(parse_int_list("0,5,10") == std::vector<int>{0, 5, 10});
    CHECK(parse_value_list("0.5, 1.5") == std::vector<std::string>{"0.5", "1.5"});
    CHECK_THROWS(parse_seed_list("5..1"));
    CHECK_THROWS(parse_int_list("a,b"));
}

TEST_CASE("compare cardinality, ordering and offered load")
{
    ConfigMap base{{"superframes", "20"}};
    const auto rows = compare(base, CompareOptions{});
    REQUIRE(rows.size() == 50);
    for (const auto& row : rows) {
        CHECK_FALSE(row.error.has_value());
        CHECK(row.gamma == doctest::Approx(3.0 + 0.2 * row.n_heavy));
        if (row.n_heavy == 5) {
            CHECK(row.gamma == doctest::Approx(4.0));
        }
    }
    CHECK(rows.front().scheme == "artgas");
    CHECK(rows.front().n_heavy == 0);
    CHECK(rows.front().seed == 1);
    CHECK(rows.back().scheme == "fcfs");
    CHECK(rows.back().n_heavy == 20);
    CHECK(rows.back().seed == 5);

    const auto text = format_csv(rows, false);
    CHECK(text.rfind(csv_header(false), 0) == 0);
    CHECK(std::count(text.begin(), text.end(), '\n') == 51);
}

TEST_CASE("compare reports failing cells as error rows")
{
    ConfigMap base{{"superframes", "5"}, {"devices.count", "8"}};
    CompareOptions o;
    o.loads = {5, 10};
    o.seeds = {1};
    o.schemes = {SchemeKind::Fcfs};
    const auto rows = compare(base, o);
    REQUIRE(rows.size() == 2);
    CHECK_FALSE(rows[0].error.has_value());
    REQUIRE(rows[1].error.has_value());
    CHECK(csv_row(rows[1], false).find("error:") != std::string::npos);
}

TEST_CASE("per-scenario rows")
{
    ConfigMap base{{"superframes", "30"}, {"devices.scenarios", "table2"}};
    const auto ex = build_experiment(base);
    const auto r = run(ex.sim);
    const auto rows = summarize_run(ex, r, true);
    REQUIRE(rows.size() == 6);
    CHECK(rows[0].scenario == "all");
    std::uint64_t delivered = 0;
    double gamma = 0.0;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        CHECK(rows[i].scenario == std::to_string(i));
        delivered += rows[i].summary.frames_delivered;
        gamma += rows[i].gamma;
    }
    CHECK(delivered == rows[0].summary.frames_delivered);
    CHECK(gamma == doctest::Approx(rows[0].gamma));
}

TEST_CASE("sweep")
{
    ConfigMap base{{"superframes", "10"}};
    SweepOptions o;
    o.param = "mu_M";
    o.values = {"0.2", "0.8"};
    o.seeds = {1, 2};
    const auto rows = sweep(base, o);
    REQUIRE(rows.size() == 4);
    CHECK(rows[0].param == "artgas.mu_m");
    CHECK(rows[0].value == "0.2");
    CHECK(format_csv(rows, true).rfind("param,value,", 0) == 0);

    o.param = "not_a_param";
    CHECK_THROWS_AS(sweep(base, o), ConfigError);
}
