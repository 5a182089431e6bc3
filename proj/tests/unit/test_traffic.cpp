#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "gtsim/error.hpp"
#include "gtsim/traffic.hpp"

#include <cmath>

using namespace gtsim;

TEST_CASE("offered load")
{
    CHECK(offered_load(20, 5, kHeavyRate, kLightRate) == doctest::Approx(4.0).epsilon(1e-12));
    CHECK(offered_load(20, 0, kHeavyRate, kLightRate) == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(offered_load(20, 20, kHeavyRate, kLightRate) == doctest::Approx(7.0).epsilon(1e-12));
    CHECK_THROWS(offered_load(20, 21, kHeavyRate, kLightRate));
    CHECK_THROWS(offered_load(20, -1, kHeavyRate, kLightRate));
}

TEST_CASE("offered load is linear in the number of heavy devices")
{
    const double step = kHeavyRate - kLightRate;
    for (int nh = 0; nh < 20; ++nh) {
        CHECK(offered_load(20, nh + 1, kHeavyRate, kLightRate) - offered_load(20, nh, kHeavyRate, kLightRate) ==
              doctest::Approx(step).epsilon(1e-12));
    }
}

TEST_CASE("exponential gap by inverse CDF")
{
    CHECK(exponential_gap(0.35, std::exp(-1.0)) == doctest::Approx(2.857142857142857).epsilon(1e-12));
    CHECK(exponential_gap(0.35, 1.0) == 0.0);
    CHECK(exponential_gap(0.35, 1.0 - 1e-12) < 1e-9);
    CHECK_THROWS(exponential_gap(0.35, 0.0));
    CHECK_THROWS(exponential_gap(0.0, 0.5));
}

TEST_CASE("mean Poisson gap converges")
{
    TrafficProfile p;
    p.rate = 0.15;
    auto stream = RandomStream::derive(1, 0, StreamKind::Arrivals);
    double now = 0.0;
    const int n = 100000;
    for (int i = 0; i < n; ++i) {
        const double next = next_arrival(p, now, stream);
        CHECK_MESSAGE(next >= now, "arrivals must not go backwards");
        now = next;
    }
    const double mean = now / n;
    CHECK(std::abs(mean - 1.0 / 0.15) <= 0.02 * (1.0 / 0.15));
}

TEST_CASE("profile validation")
{
    TrafficProfile p;
    CHECK_NOTHROW(p.validate());
    p.frame_bytes = 128;
    CHECK_THROWS_AS(p.validate(), ConfigError);
    p.frame_bytes = 127;
    p.rate = -1.0;
    CHECK_THROWS_AS(p.validate(), ConfigError);
    CHECK(parse_traffic_class("Heavy") == TrafficClass::Heavy);
    CHECK_FALSE(parse_traffic_class("medium").has_value());
}

TEST_CASE("bounded queue")
{
    DeviceQueue q(150);
    for (std::uint64_t i = 0; i < 149; ++i) {
        REQUIRE(q.enqueue(Frame{i, 0.0}));
    }
    CHECK(q.enqueue(Frame{149, 0.0}));
    CHECK(q.size() == 150);
    CHECK_FALSE(q.enqueue(Frame{150, 0.0}));
    CHECK_FALSE(q.enqueue(Frame{151, 0.0}));
    CHECK(q.dropped() == 2);
    CHECK(q.size() == 150);

    for (std::uint64_t i = 0; i < 150; ++i) {
        auto f = q.dequeue();
        REQUIRE(f.has_value());
        CHECK(f->id == i);
    }
    CHECK(q.empty());
    CHECK_FALSE(q.dequeue().has_value());
    CHECK(q.front() == nullptr);
}
