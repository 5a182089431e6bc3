#pragma once

// Throughput, delay, waiting time and CFP utilization accounting.

#include "gtsim/allocator.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace gtsim {

struct DeviceMetrics {
    std::uint64_t frames_generated = 0;
    std::uint64_t frames_delivered = 0;
    std::uint64_t frames_dropped = 0;
    double sum_delay_s = 0.0; // generation -> end of reception
    double sum_wait_s = 0.0;  // generation -> start of transmission
    std::uint64_t cfp_slots_allocated = 0;
    std::uint64_t cfp_slots_used = 0;
    std::uint64_t gts_grants = 0;
    std::uint64_t gts_revocations = 0;
};

struct FrameRecord {
    DeviceId device = 0;
    double generated_at = 0.0;
    double tx_start = 0.0;
    double rx_end = 0.0;
};

class MetricsLedger {
public:
    MetricsLedger() = default;
    MetricsLedger(std::size_t devices, bool keep_frames);

    void on_generated(DeviceId device);
    void on_dropped(DeviceId device);
    void on_delivered(DeviceId device, double generated_at, double tx_start, double rx_end);
    void on_slot_allocated(DeviceId device);
    void on_slot_used(DeviceId device);
    void on_grant(DeviceId device);
    void on_revocation(DeviceId device);

    void set_horizon(std::int64_t superframes, double horizon_s);

    const DeviceMetrics& totals() const { return totals_; }
    const DeviceMetrics& device(DeviceId id) const { return devices_.at(id); }
    std::size_t device_count() const { return devices_.size(); }
    /// Per-frame records; empty unless the ledger was built with keep_frames.
    const std::vector<FrameRecord>& frames() const { return frames_; }
    std::int64_t superframes() const { return superframes_; }
    double horizon_s() const { return horizon_s_; }

    /// Sums the per-device breakdowns of `ids`.
    DeviceMetrics aggregate(std::span<const DeviceId> ids) const;

    friend bool operator==(const MetricsLedger&, const MetricsLedger&);

private:
    DeviceMetrics totals_;
    std::vector<DeviceMetrics> devices_;
    std::vector<FrameRecord> frames_;
    bool keep_frames_ = false;
    std::int64_t superframes_ = 0;
    double horizon_s_ = 0.0;
};

bool operator==(const DeviceMetrics& a, const DeviceMetrics& b);

enum class BandwidthMode {
    Allocated, // used / allocated CFP slots
    Total,     // used / all 16 slots of every superframe
};

/// S = (delivered / horizon) / gamma. Throws std::invalid_argument for a
/// non-positive horizon or gamma.
double success_probability(std::uint64_t frames_delivered, double gamma, double horizon_s);

struct Summary {
    double success_prob = 0.0;
    std::optional<double> avg_delay_s; // empty when nothing was delivered
    std::optional<double> avg_wait_s;
    std::optional<double> bandwidth_util; // empty when no slot was allocated
    std::uint64_t frames_generated = 0;
    std::uint64_t frames_delivered = 0;
    std::uint64_t frames_dropped = 0;
};

Summary summarize(const DeviceMetrics& m, double gamma, double horizon_s, std::int64_t superframes,
                  BandwidthMode mode = BandwidthMode::Allocated);

inline Summary summarize(const MetricsLedger& ledger, double gamma,
                         BandwidthMode mode = BandwidthMode::Allocated)
{
    return summarize(ledger.totals(), gamma, ledger.horizon_s(), ledger.superframes(), mode);
}

} // namespace gtsim
