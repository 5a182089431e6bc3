#pragma once

// Deterministic discrete-event simulation of a beacon-enabled star PAN.
// Time is integer symbols since the first beacon.

#include "gtsim/allocator.hpp"
#include "gtsim/channel.hpp"
#include "gtsim/metrics.hpp"
#include "gtsim/priority.hpp"
#include "gtsim/random.hpp"
#include "gtsim/superframe.hpp"
#include "gtsim/traffic.hpp"

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace gtsim {

enum class CapMode { Ideal, Bernoulli, Budget };

std::string_view to_string(CapMode mode);
std::optional<CapMode> parse_cap_mode(std::string_view text);

/// Abstraction of slotted CSMA/CA in the CAP: ideal delivery, an i.i.d.
/// success probability, or the path-loss link budget.
struct CapModel {
    CapMode mode = CapMode::Ideal;
    double success_prob = 1.0;
};

struct ChannelState {
    PathLossParams path_loss;
    LinkBudget budget;
    double frequency = 2400.0; // MHz
};

struct DeviceSpec {
    TrafficProfile traffic;
    ArrivalMode arrival_mode = ArrivalMode::Poisson;
    std::optional<double> phase_s; // periodic mode: first arrival; drawn when unset
    double active_until_s = std::numeric_limits<double>::infinity();
    std::size_t buffer_frames = 150;
    int base_importance = 0;
    double realtime_prob = 0.0;  // per-superframe marker probabilities
    double exception_prob = 0.0;
    double initial_rate = 10.0;
    double distance_mm = 500.0;
    int scenario = 0; // Table-style scenario label, 0 when unassigned
};

struct SimConfig {
    SchemeKind scheme = SchemeKind::ArtGas;
    SuperframeConfig superframe;
    double data_rate_bps = 200000.0;
    std::vector<DeviceSpec> devices;
    std::int64_t duration_superframes = 1000;
    std::uint64_t seed = 1;
    CapModel cap;
    ChannelState channel;
    RateUpdateParams rate;
    double rate_floor = 1.0;
    double rate_ceiling = 59.0;
    ThresholdParams thresholds;
    int artgas_idle_limit = 1;
    SlotOrder artgas_slot_order = SlotOrder::Priority;
    int backoff_exponent = 3; // CAP request jitter: U{0..2^BE-1} unit backoff periods
    bool record_trace = false;
    bool record_frames = false;

    /// Throws ConfigError on the first invalid field.
    void validate() const;
};

enum class EventKind { Beacon, FrameArrival, CapRequestAttempt, CfpSlotStart, SimEnd };

std::string_view to_string(EventKind kind);

struct SimEvent {
    std::int64_t time = 0; // symbols
    EventKind kind = EventKind::Beacon;
    std::uint64_t sequence = 0;
    DeviceId device = 0;
    std::int64_t superframe = 0;

    /// Heap ordering: earlier time first, then kind order, then insertion.
    friend bool later(const SimEvent& a, const SimEvent& b);
};

struct TraceEntry {
    std::int64_t time = 0;
    std::int64_t superframe = 0;
    EventKind kind = EventKind::Beacon;
    DeviceId device = 0;
    std::string detail;

    friend bool operator==(const TraceEntry&, const TraceEntry&) = default;
};

enum class GtsAction { Granted, Rejected, Revoked };

struct GtsEvent {
    std::int64_t superframe = 0;
    DeviceId device = 0;
    GtsAction action = GtsAction::Granted;

    friend bool operator==(const GtsEvent&, const GtsEvent&) = default;
};

struct DeviceFinalState {
    DataPriority data;
    RatePriority rate;
    bool holds_gts = false;
    std::size_t queued = 0;
};

struct SimResult {
    MetricsLedger ledger;
    std::vector<GtsEvent> gts_log;
    std::vector<TraceEntry> trace; // filled when record_trace is set
    std::vector<DeviceFinalState> devices;
    double gamma = 0.0; // configured offered load, frames/s
    std::uint64_t frames_in_queues = 0;
};

struct CapAttempt {
    bool delivered = false;
    bool attempted = false;
};

/// One CAP channel access. The attempt always counts as a CSMA/CA hit;
/// delivery follows the configured model.
CapAttempt cap_attempt(const DeviceSpec& device, const CapModel& model, const ChannelState& channel,
                       RandomStream& stream);

/// floor(slot_seconds * data_rate / frame_bits).
int slot_capacity_frames(const SuperframeTiming& timing, double data_rate_bps, int frame_bytes);

/// Dequeues up to `capacity` frames for a GTS slot.
std::vector<Frame> cfp_transmit(DeviceQueue& queue, int capacity);

SimResult run(const SimConfig& config);

} // namespace gtsim
