#pragma once

// Coordinator-side GTS bookkeeping and the two allocation policies: the
// standard first-come-first-served rule with its 2n-superframe passive
// timeout, and the priority/threshold driven ART-GAS policy.

#include "gtsim/priority.hpp"
#include "gtsim/superframe.hpp"

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace gtsim {

using DeviceId = std::uint32_t;

/// Owner -> whether the owner transmitted in its GTS during the last superframe.
using UsageMap = std::map<DeviceId, bool>;

enum class SchemeKind { Fcfs, ArtGas };

std::string_view to_string(SchemeKind kind);
/// Accepts "fcfs" or "artgas" (case-insensitive, "art-gas" also allowed).
std::optional<SchemeKind> parse_scheme(std::string_view text);

struct GtsRequest {
    DeviceId device = 0;
    int desired_slots = 1;
    std::int64_t arrival_superframe = 0;
    std::int64_t arrival_symbol = 0;
    bool is_deallocation = false;
};

struct GtsDescriptor {
    DeviceId device = 0;
    int start_slot = kNumSlots;
    int length_slots = 1;
    int idle_superframes = 0;
};

/// The coordinator's live GTS descriptors. Descriptors are kept in grant
/// order and laid out contiguously backwards from the end of the active
/// period, so the oldest grant owns slot 15.
class GtsTable {
public:
    const std::vector<GtsDescriptor>& descriptors() const { return entries_; }
    std::size_t size() const { return entries_.size(); }
    bool empty() const { return entries_.empty(); }
    int cfp_slots() const;
    bool holds(DeviceId device) const { return find(device) != nullptr; }
    const GtsDescriptor* find(DeviceId device) const;

    CapCfpSplit split(const SuperframeConfig& config) const;

    /// Appends a descriptor; the caller has already checked capacity.
    const GtsDescriptor& add(DeviceId device, int length_slots = 1);
    bool remove(DeviceId device);

    /// Re-lays the CFP so that owners listed in `earliest_first` transmit in
    /// that order; unlisted owners keep their relative order after them.
    void arrange(std::span<const DeviceId> earliest_first);

    /// Resets idle counters of owners that used their slot, increments the rest.
    /// Owners missing from `usage` count as unused.
    void record_usage(const UsageMap& usage);

    /// First violated structural invariant, if any: more than seven GTSs,
    /// overlapping or out-of-CFP descriptors, or a CAP shorter than aMinCAPLength.
    std::optional<std::string> violation(const SuperframeConfig& config) const;

private:
    GtsDescriptor* find_mutable(DeviceId device);
    void relayout();

    std::vector<GtsDescriptor> entries_;
};

struct AllocationResult {
    std::vector<GtsDescriptor> grants;
    std::vector<DeviceId> rejects;
    std::vector<std::string> diagnostics;
};

/// Honors deallocation requests (characteristic type zero) and returns the
/// devices whose descriptors were removed.
std::vector<DeviceId> apply_deallocation_requests(std::span<const GtsRequest> requests, GtsTable& table);

/// Grants requests in the order given while the superframe keeps capacity.
/// Requests from devices that already own a GTS are ignored with a diagnostic.
/// Deallocation requests in `pending` are processed first.
AllocationResult fcfs_allocate(std::span<const GtsRequest> pending, GtsTable& table,
                               const SuperframeConfig& config);

/// Revokes descriptors idle for at least 2n superframes.
std::vector<DeviceId> fcfs_deallocate_expired(GtsTable& table, const SuperframeConfig& config);

struct ThresholdParams {
    double mu_middle = 0.4;
    double mu_low = 0.6;
    double delta = 0.9;

    void validate() const;
};

/// mu * sum_i sqrt(P_i^2) / (N * delta^BO).
double compute_threshold(std::span<const double> priorities, double mu, double delta, int beacon_order);

struct Thresholds {
    double low = 0.0;
    double middle = 0.0;
    double high = kHighThreshold;

    double for_state(DataState state) const;
};

Thresholds make_thresholds(std::span<const double> all_priorities, const ThresholdParams& params,
                           int beacon_order);

struct Candidate {
    DeviceId device = 0;
    DataState state = DataState::Low;
    double priority = 0.0; // P_i
};

/// Filters candidates against their state's threshold, ranks survivors by
/// P_i descending (ties by ascending device id) and grants in that order
/// while capacity remains.
AllocationResult artgas_allocate(std::span<const Candidate> candidates, const Thresholds& thresholds,
                                 GtsTable& table, const SuperframeConfig& config);

/// Active reclamation: records `usage` and revokes every descriptor idle for
/// `idle_limit` consecutive superframes.
std::vector<DeviceId> artgas_reclaim(GtsTable& table, const UsageMap& usage, int idle_limit = 1);

struct DevicePriorityView {
    DeviceId device = 0;
    DataState state = DataState::Low;
    double effective = 0.0;
};

struct BeaconContext {
    std::span<const GtsRequest> requests;           // delivered during the last CAP, arrival order
    std::span<const DevicePriorityView> priorities; // every device in the PAN
    const UsageMap* usage = nullptr;                // descriptor owners' last-superframe usage
};

struct BeaconDecision {
    std::vector<DeviceId> revoked;
    AllocationResult allocation;
    std::optional<Thresholds> thresholds;
};

/// Policy run by the coordinator at every beacon: deallocation requests, then
/// revocation of idle descriptors, then new grants.
class AllocationScheme {
public:
    virtual ~AllocationScheme() = default;
    virtual SchemeKind kind() const = 0;
    virtual BeaconDecision on_beacon(const BeaconContext& context, GtsTable& table) = 0;
};

/// Where ART-GAS places owners inside the CFP.
enum class SlotOrder {
    Grant,    // oldest grant last in the superframe (standard packing)
    Priority, // highest current P_i first in the CFP, re-laid every beacon
};

std::optional<SlotOrder> parse_slot_order(std::string_view text);
std::string_view to_string(SlotOrder order);

std::unique_ptr<AllocationScheme> make_scheme(SchemeKind kind, const SuperframeConfig& config,
                                              const ThresholdParams& thresholds, int artgas_idle_limit,
                                              SlotOrder slot_order = SlotOrder::Priority);

} // namespace gtsim
