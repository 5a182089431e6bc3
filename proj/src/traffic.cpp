#include "gtsim/traffic.hpp"

#include "gtsim/error.hpp"

#include <cctype>
#include <cmath>
#include <stdexcept>
#include <string>

namespace gtsim {

std::string_view to_string(TrafficClass cls)
{
    return cls == TrafficClass::Heavy ? "heavy" : "light";
}

std::optional<TrafficClass> parse_traffic_class(std::string_view text)
{
    std::string lower;
    for (char c : text) {
        lower.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    }
    if (lower == "heavy") {
        return TrafficClass::Heavy;
    }
    if (lower == "light") {
        return TrafficClass::Light;
    }
    return std::nullopt;
}

void TrafficProfile::validate() const
{
    if (!(rate > 0.0) || !std::isfinite(rate)) {
        throw ConfigError("traffic rate must be finite and > 0");
    }
    if (frame_bytes < 1 || frame_bytes > kMaxFrameBytes) {
        throw ConfigError("frame size must lie in 1..127 bytes");
    }
}

double offered_load(int n_devices, int n_heavy, double chi_h, double chi_l)
{
    if (n_devices < 0 || n_heavy < 0 || n_heavy > n_devices) {
        throw std::invalid_argument("need 0 <= N_h <= N (N=" + std::to_string(n_devices) +
                                    ", N_h=" + std::to_string(n_heavy) + ")");
    }
    return n_heavy * chi_h + (n_devices - n_heavy) * chi_l;
}

double exponential_gap(double rate, double u)
{
    if (!(u > 0.0 && u <= 1.0)) {
        throw std::invalid_argument("uniform draw must lie in (0, 1]");
    }
    if (!(rate > 0.0) || !std::isfinite(rate)) {
        throw std::invalid_argument("arrival rate must be finite and positive");
    }
    return -std::log(u) / rate;
}

double next_arrival(const TrafficProfile& profile, double now, RandomStream& stream)
{
    if (!std::isfinite(now)) {
        throw std::invalid_argument("current time is not finite");
    }
    return now + exponential_gap(profile.rate, stream.uniform_open_zero());
}

bool DeviceQueue::enqueue(const Frame& frame)
{
    if (entries_.size() >= capacity_) {
        ++dropped_;
        return false;
    }
    entries_.push_back(frame);
    return true;
}

std::optional<Frame> DeviceQueue::dequeue()
{
    if (entries_.empty()) {
        return std::nullopt;
    }
    Frame f = entries_.front();
    entries_.pop_front();
    return f;
}

} // namespace gtsim
