#pragma once

// Frame arrivals for heavy/light devices, the offered load and the bounded
// per-device FIFO.

#include "gtsim/random.hpp"

#include <cstdint>
#include <deque>
#include <optional>
#include <string_view>

namespace gtsim {

enum class TrafficClass { Heavy, Light };

std::string_view to_string(TrafficClass cls);
std::optional<TrafficClass> parse_traffic_class(std::string_view text);

enum class ArrivalMode { Poisson, Periodic };

inline constexpr double kHeavyRate = 0.35; // frames/s
inline constexpr double kLightRate = 0.15; // frames/s
inline constexpr int kMaxFrameBytes = 127;

struct TrafficProfile {
    TrafficClass cls = TrafficClass::Light;
    double rate = kLightRate; // arrivals per second
    int frame_bytes = kMaxFrameBytes;

    void validate() const;
};

/// Gamma = N_h * chi_h + (N - N_h) * chi_l, in frames per second.
double offered_load(int n_devices, int n_heavy, double chi_h, double chi_l);

/// Inverse-CDF exponential gap -ln(u)/rate for u in (0, 1].
double exponential_gap(double rate, double u);

/// Next Poisson arrival after `now`.
double next_arrival(const TrafficProfile& profile, double now, RandomStream& stream);

struct Frame {
    std::uint64_t id = 0;
    double generated_at = 0.0; // seconds
};

class DeviceQueue {
public:
    explicit DeviceQueue(std::size_t capacity = 150) : capacity_(capacity) {}

    /// Appends unless full; a refused frame bumps dropped().
    bool enqueue(const Frame& frame);
    std::optional<Frame> dequeue();

    const Frame* front() const { return entries_.empty() ? nullptr : &entries_.front(); }
    std::size_t size() const { return entries_.size(); }
    bool empty() const { return entries_.empty(); }
    std::size_t capacity() const { return capacity_; }
    std::uint64_t dropped() const { return dropped_; }

private:
    std::size_t capacity_;
    std::deque<Frame> entries_;
    std::uint64_t dropped_ = 0;
};

} // namespace gtsim
