#include "gtsim/superframe.hpp"

#include "gtsim/error.hpp"

#include <string>

namespace gtsim {

void SuperframeConfig::validate() const
{
    if (superframe_order < 0 || superframe_order > kMaxOrder || beacon_order < 0 ||
        beacon_order > kMaxOrder) {
        throw ConfigError("superframe orders must lie in 0..14 (BO=" + std::to_string(beacon_order) +
                          ", SO=" + std::to_string(superframe_order) + ")");
    }
    if (superframe_order > beacon_order) {
        throw ConfigError("superframe order must not exceed beacon order (SO=" +
                          std::to_string(superframe_order) + " > BO=" + std::to_string(beacon_order) +
                          ")");
    }
    if (!(symbol_rate > 0.0)) {
        throw ConfigError("symbol_rate must be positive");
    }
    if (base_superframe_symbols <= 0 || base_superframe_symbols % kNumSlots != 0) {
        throw ConfigError("base_superframe_symbols must be a positive multiple of 16");
    }
    if (min_cap_symbols < 0) {
        throw ConfigError("min_cap_symbols must be non-negative");
    }
}

SuperframeTiming derive_timing(const SuperframeConfig& config)
{
    config.validate();
    SuperframeTiming t;
    t.sd_symbols = config.base_superframe_symbols << config.superframe_order;
    t.bi_symbols = config.base_superframe_symbols << config.beacon_order;
    t.slot_symbols = t.sd_symbols / kNumSlots;
    t.sd_seconds = static_cast<double>(t.sd_symbols) / config.symbol_rate;
    t.bi_seconds = static_cast<double>(t.bi_symbols) / config.symbol_rate;
    return t;
}

namespace {

std::int64_t cap_symbols_for(const SuperframeConfig& config, int cfp_slots)
{
    const auto slot = (config.base_superframe_symbols << config.superframe_order) / kNumSlots;
    // slot 0 carries the beacon and is not counted as CAP
    return static_cast<std::int64_t>(kNumSlots - 1 - cfp_slots) * slot;
}

} // namespace

CapCfpSplit make_split(const SuperframeConfig& config, int cfp_slots)
{
    if (cfp_slots < 0 || cfp_slots > kMaxGts) {
        throw std::invalid_argument("cfp_slots out of range: " + std::to_string(cfp_slots));
    }
    CapCfpSplit split;
    split.cfp_slots = cfp_slots;
    split.cfp_start_slot = kNumSlots - cfp_slots;
    split.cap_symbols = cap_symbols_for(config, cfp_slots);
    return split;
}

CapCheck cap_length_after(const CapCfpSplit& split, const SuperframeConfig& config, int extra_slots)
{
    const int total = split.cfp_slots + extra_slots;
    CapCheck check;
    check.cap_symbols = cap_symbols_for(config, total);
    check.feasible = extra_slots >= 0 && total <= kMaxGts && check.cap_symbols >= config.min_cap_symbols;
    return check;
}

int deallocation_multiplier(int beacon_order)
{
    if (beacon_order < 0 || beacon_order > kMaxOrder) {
        throw std::invalid_argument("beacon order out of range: " + std::to_string(beacon_order));
    }
    return beacon_order <= 8 ? 1 << (8 - beacon_order) : 1;
}

} // namespace gtsim
