#include "gtsim/allocator.hpp"

#include "gtsim/error.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <set>
#include <stdexcept>

namespace gtsim {

std::string_view to_string(SchemeKind kind)
{
    return kind == SchemeKind::Fcfs ? "fcfs" : "artgas";
}

std::optional<SchemeKind> parse_scheme(std::string_view text)
{
    std::string lower;
    for (char c : text) {
        if (c != '-' && c != '_') {
            lower.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
        }
    }
    if (lower == "fcfs") {
        return SchemeKind::Fcfs;
    }
    if (lower == "artgas") {
        return SchemeKind::ArtGas;
    }
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// GtsTable

int GtsTable::cfp_slots() const
{
    int total = 0;
    for (const auto& d : entries_) {
        total += d.length_slots;
    }
    return total;
}

const GtsDescriptor* GtsTable::find(DeviceId device) const
{
    auto it = std::find_if(entries_.begin(), entries_.end(),
                           [device](const GtsDescriptor& d) { return d.device == device; });
    return it == entries_.end() ? nullptr : &*it;
}

GtsDescriptor* GtsTable::find_mutable(DeviceId device)
{
    return const_cast<GtsDescriptor*>(std::as_const(*this).find(device));
}

CapCfpSplit GtsTable::split(const SuperframeConfig& config) const
{
    return make_split(config, cfp_slots());
}

const GtsDescriptor& GtsTable::add(DeviceId device, int length_slots)
{
    if (holds(device)) {
        throw std::logic_error("device already owns a GTS");
    }
    if (length_slots < 1) {
        throw std::invalid_argument("GTS length must be at least one slot");
    }
    entries_.push_back(GtsDescriptor{device, kNumSlots, length_slots, 0});
    relayout();
    return entries_.back();
}

bool GtsTable::remove(DeviceId device)
{
    auto it = std::find_if(entries_.begin(), entries_.end(),
                           [device](const GtsDescriptor& d) { return d.device == device; });
    if (it == entries_.end()) {
        return false;
    }
    entries_.erase(it);
    relayout();
    return true;
}

void GtsTable::arrange(std::span<const DeviceId> earliest_first)
{
    // entries_ runs from the end of the CFP backwards, so the earliest
    // transmitter must come last
    auto rank = [&](DeviceId id) {
        auto it = std::find(earliest_first.begin(), earliest_first.end(), id);
        return it == earliest_first.end() ? earliest_first.size() : static_cast<std::size_t>(it - earliest_first.begin());
    };
    std::stable_sort(entries_.begin(), entries_.end(),
                     [&](const GtsDescriptor& a, const GtsDescriptor& b) { return rank(a.device) > rank(b.device); });
    relayout();
}

void GtsTable::record_usage(const UsageMap& usage)
{
    for (auto& d : entries_) {
        auto it = usage.find(d.device);
        if (it != usage.end() && it->second) {
            d.idle_superframes = 0;
        } else {
            ++d.idle_superframes;
        }
    }
}

void GtsTable::relayout()
{
    int next_end = kNumSlots;
    for (auto& d : entries_) {
        d.start_slot = next_end - d.length_slots;
        next_end = d.start_slot;
    }
}

std::optional<std::string> GtsTable::violation(const SuperframeConfig& config) const
{
    if (entries_.size() > static_cast<std::size_t>(kMaxGts)) {
        return "more than seven GTS descriptors";
    }
    const int slots = cfp_slots();
    if (slots > kMaxGts) {
        return "CFP longer than seven slots";
    }
    const auto split = make_split(config, slots);
    if (slots > 0 && split.cap_symbols < config.min_cap_symbols) {
        return "CAP shorter than aMinCAPLength";
    }
    std::vector<bool> taken(kNumSlots, false);
    std::set<DeviceId> owners;
    for (const auto& d : entries_) {
        if (!owners.insert(d.device).second) {
            return "device owns two descriptors";
        }
        if (d.start_slot < split.cfp_start_slot || d.start_slot + d.length_slots > kNumSlots) {
            return "descriptor outside the CFP";
        }
        for (int s = d.start_slot; s < d.start_slot + d.length_slots; ++s) {
            if (taken[s]) {
                return "overlapping descriptors";
            }
            taken[s] = true;
        }
    }
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// FCFS

std::vector<DeviceId> apply_deallocation_requests(std::span<const GtsRequest> requests, GtsTable& table)
{
    std::vector<DeviceId> revoked;
    for (const auto& r : requests) {
        if (r.is_deallocation && table.remove(r.device)) {
            revoked.push_back(r.device);
        }
    }
    return revoked;
}

namespace {

bool try_grant(DeviceId device, int slots, GtsTable& table, const SuperframeConfig& config,
               AllocationResult& result)
{
    if (!cap_length_after(table.split(config), config, slots).feasible) {
        result.rejects.push_back(device);
        return false;
    }
    result.grants.push_back(table.add(device, slots));
    return true;
}

std::string duplicate_message(DeviceId device)
{
    return "device " + std::to_string(device) + " already owns a GTS; request ignored";
}

} // namespace

AllocationResult fcfs_allocate(std::span<const GtsRequest> pending, GtsTable& table,
                               const SuperframeConfig& config)
{
    apply_deallocation_requests(pending, table);
    AllocationResult result;
    for (const auto& r : pending) {
        if (r.is_deallocation) {
            continue;
        }
        if (r.desired_slots < 1) {
            throw std::invalid_argument("GTS request for fewer than one slot");
        }
        if (table.holds(r.device)) {
            result.diagnostics.push_back(duplicate_message(r.device));
            continue;
        }
        try_grant(r.device, r.desired_slots, table, config, result);
    }
    // grants were taken from `table`; refresh them with the final layout
    for (auto& g : result.grants) {
        g = *table.find(g.device);
    }
    return result;
}

std::vector<DeviceId> fcfs_deallocate_expired(GtsTable& table, const SuperframeConfig& config)
{
    const int limit = 2 * deallocation_multiplier(config.beacon_order);
    std::vector<DeviceId> expired;
    for (const auto& d : table.descriptors()) {
        if (d.idle_superframes >= limit) {
            expired.push_back(d.device);
        }
    }
    for (DeviceId id : expired) {
        table.remove(id);
    }
    return expired;
}

// ---------------------------------------------------------------------------
// ART-GAS

void ThresholdParams::validate() const
{
    if (!(mu_middle > 0.0) || !std::isfinite(mu_middle)) {
        throw ConfigError("mu_M must be finite and > 0");
    }
    if (!(mu_low > 0.0) || !std::isfinite(mu_low)) {
        throw ConfigError("mu_L must be finite and > 0");
    }
    if (!(delta > 0.0 && delta <= 1.0)) {
        throw ConfigError("delta must lie in (0, 1]");
    }
}

double compute_threshold(std::span<const double> priorities, double mu, double delta, int beacon_order)
{
    if (priorities.empty()) {
        throw std::invalid_argument("threshold over an empty PAN");
    }
    if (!(mu > 0.0) || !(delta > 0.0 && delta <= 1.0)) {
        throw std::invalid_argument("threshold parameters out of range");
    }
    double sum = 0.0;
    for (double p : priorities) {
        sum += std::abs(p); // sqrt(P_i^2)
    }
    const double n = static_cast<double>(priorities.size());
    return mu * sum / (n * std::pow(delta, beacon_order));
}

double Thresholds::for_state(DataState state) const
{
    switch (state) {
    case DataState::Low:
        return low;
    case DataState::Middle:
        return middle;
    case DataState::High:
        return high;
    }
    return high;
}

Thresholds make_thresholds(std::span<const double> all_priorities, const ThresholdParams& params,
                           int beacon_order)
{
    Thresholds t;
    t.middle = compute_threshold(all_priorities, params.mu_middle, params.delta, beacon_order);
    t.low = compute_threshold(all_priorities, params.mu_low, params.delta, beacon_order);
    return t;
}

AllocationResult artgas_allocate(std::span<const Candidate> candidates, const Thresholds& thresholds,
                                 GtsTable& table, const SuperframeConfig& config)
{
    AllocationResult result;
    std::vector<Candidate> eligible;
    std::set<DeviceId> seen;
    for (const auto& c : candidates) {
        if (table.holds(c.device) || !seen.insert(c.device).second) {
            result.diagnostics.push_back(duplicate_message(c.device));
            continue;
        }
        if (c.priority >= thresholds.for_state(c.state)) {
            eligible.push_back(c);
        } else {
            result.rejects.push_back(c.device);
        }
    }
    std::stable_sort(eligible.begin(), eligible.end(), [](const Candidate& a, const Candidate& b) {
        if (a.priority != b.priority) {
            return a.priority > b.priority;
        }
        return a.device < b.device;
    });
    for (const auto& c : eligible) {
        try_grant(c.device, 1, table, config, result);
    }
    for (auto& g : result.grants) {
        g = *table.find(g.device);
    }
    return result;
}

std::vector<DeviceId> artgas_reclaim(GtsTable& table, const UsageMap& usage, int idle_limit)
{
    if (idle_limit < 1) {
        throw std::invalid_argument("idle limit must be at least one superframe");
    }
    table.record_usage(usage);
    std::vector<DeviceId> reclaimed;
    for (const auto& d : table.descriptors()) {
        if (d.idle_superframes >= idle_limit) {
            reclaimed.push_back(d.device);
        }
    }
    for (DeviceId id : reclaimed) {
        table.remove(id);
    }
    return reclaimed;
}

// ---------------------------------------------------------------------------
// Schemes

namespace {

const UsageMap kNoUsage;

class FcfsScheme final : public AllocationScheme {
public:
    explicit FcfsScheme(const SuperframeConfig& config) : config_(config) {}

    SchemeKind kind() const override { return SchemeKind::Fcfs; }

    BeaconDecision on_beacon(const BeaconContext& context, GtsTable& table) override
    {
        BeaconDecision decision;
        decision.revoked = apply_deallocation_requests(context.requests, table);
        table.record_usage(context.usage ? *context.usage : kNoUsage);
        auto expired = fcfs_deallocate_expired(table, config_);
        decision.revoked.insert(decision.revoked.end(), expired.begin(), expired.end());
        decision.allocation = fcfs_allocate(context.requests, table, config_);
        return decision;
    }

private:
    SuperframeConfig config_;
};

class ArtGasScheme final : public AllocationScheme {
public:
    ArtGasScheme(const SuperframeConfig& config, const ThresholdParams& params, int idle_limit, SlotOrder order)
        : config_(config), params_(params), idle_limit_(idle_limit), order_(order)
    {
        params_.validate();
        if (idle_limit_ < 1) {
            throw ConfigError("artgas idle limit must be at least 1");
        }
    }

    SchemeKind kind() const override { return SchemeKind::ArtGas; }

    BeaconDecision on_beacon(const BeaconContext& context, GtsTable& table) override
    {
        BeaconDecision decision;
        decision.revoked = apply_deallocation_requests(context.requests, table);
        auto reclaimed = artgas_reclaim(table, context.usage ? *context.usage : kNoUsage, idle_limit_);
        decision.revoked.insert(decision.revoked.end(), reclaimed.begin(), reclaimed.end());

        std::vector<Candidate> candidates;
        if (!context.priorities.empty()) {
            std::vector<double> all;
            all.reserve(context.priorities.size());
            for (const auto& p : context.priorities) {
                all.push_back(p.effective);
            }
            const Thresholds thresholds = make_thresholds(all, params_, config_.beacon_order);
            decision.thresholds = thresholds;
            for (const auto& r : context.requests) {
                if (r.is_deallocation) {
                    continue;
                }
                auto it = std::find_if(context.priorities.begin(), context.priorities.end(),
                                       [&](const DevicePriorityView& v) { return v.device == r.device; });
                if (it == context.priorities.end()) {
                    decision.allocation.diagnostics.push_back("request from unknown device " +
                                                              std::to_string(r.device));
                    continue;
                }
                candidates.push_back(Candidate{it->device, it->state, it->effective});
            }
            auto result = artgas_allocate(candidates, thresholds, table, config_);
            result.diagnostics.insert(result.diagnostics.begin(), decision.allocation.diagnostics.begin(),
                                      decision.allocation.diagnostics.end());
            decision.allocation = std::move(result);

            if (order_ == SlotOrder::Priority && table.size() > 1) {
                std::vector<DevicePriorityView> owners;
                for (const auto& p : context.priorities) {
                    if (table.holds(p.device)) {
                        owners.push_back(p);
                    }
                }
                std::stable_sort(owners.begin(), owners.end(), [](const auto& a, const auto& b) {
                    return a.effective != b.effective ? a.effective > b.effective : a.device < b.device;
                });
                std::vector<DeviceId> order;
                for (const auto& o : owners) {
                    order.push_back(o.device);
                }
                table.arrange(order);
                for (auto& g : decision.allocation.grants) {
                    g = *table.find(g.device);
                }
            }
        }
        return decision;
    }

private:
    SuperframeConfig config_;
    ThresholdParams params_;
    int idle_limit_;
    SlotOrder order_;
};

} // namespace

std::optional<SlotOrder> parse_slot_order(std::string_view text)
{
    if (text == "grant") {
        return SlotOrder::Grant;
    }
    if (text == "priority") {
        return SlotOrder::Priority;
    }
    return std::nullopt;
}

std::string_view to_string(SlotOrder order)
{
    return order == SlotOrder::Grant ? "grant" : "priority";
}

std::unique_ptr<AllocationScheme> make_scheme(SchemeKind kind, const SuperframeConfig& config,
                                              const ThresholdParams& thresholds, int artgas_idle_limit,
                                              SlotOrder slot_order)
{
    config.validate();
    if (kind == SchemeKind::Fcfs) {
        return std::make_unique<FcfsScheme>(config);
    }
    return std::make_unique<ArtGasScheme>(config, thresholds, artgas_idle_limit, slot_order);
}

} // namespace gtsim
