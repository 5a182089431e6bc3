#pragma once

// Beacon-enabled superframe geometry. All durations are integer symbols;
// seconds are derived for reporting only.

#include <cstdint>

namespace gtsim {

inline constexpr int kNumSlots = 16;
inline constexpr int kMaxGts = 7;
inline constexpr int kMaxOrder = 14;

struct SuperframeConfig {
    int beacon_order = 3;
    int superframe_order = 3;
    double symbol_rate = 62500.0;              // symbols per second (2.4 GHz O-QPSK)
    std::int64_t base_superframe_symbols = 960; // aBaseSuperframeDuration
    std::int64_t min_cap_symbols = 440;         // aMinCAPLength

    /// Throws ConfigError unless 0 <= SO <= BO <= 14 and the constants are positive.
    void validate() const;
};

struct SuperframeTiming {
    std::int64_t sd_symbols = 0;
    std::int64_t bi_symbols = 0;
    std::int64_t slot_symbols = 0;
    double sd_seconds = 0.0;
    double bi_seconds = 0.0;

    std::int64_t inactive_symbols() const { return bi_symbols - sd_symbols; }
};

SuperframeTiming derive_timing(const SuperframeConfig& config);

/// Active-period partition. The beacon owns slot 0, the CAP covers slots
/// 1..cfp_start_slot-1 and the CFP runs to the end of slot 15.
struct CapCfpSplit {
    int cfp_start_slot = kNumSlots;
    int cfp_slots = 0;
    std::int64_t cap_symbols = 0;
};

CapCfpSplit make_split(const SuperframeConfig& config, int cfp_slots);

struct CapCheck {
    std::int64_t cap_symbols = 0;
    bool feasible = false;
};

/// CAP length if `extra_slots` more CFP slots were granted on top of `split`.
CapCheck cap_length_after(const CapCfpSplit& split, const SuperframeConfig& config, int extra_slots);

/// Multiplier n of the passive deallocation timeout (2n idle superframes):
/// 2^(8-BO) for BO <= 8, 1 otherwise.
int deallocation_multiplier(int beacon_order);

} // namespace gtsim
