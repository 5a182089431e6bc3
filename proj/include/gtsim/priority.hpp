#pragma once

// Service differentiation: the Low/Middle/High data-based priority state
// machine and the per-superframe rate-based priority update.

#include <string_view>

namespace gtsim {

enum class DataState { Low, Middle, High };

std::string_view to_string(DataState state);

inline constexpr int kDataPriorityLevels = 60; // N_d
inline constexpr int kBandWidth = 20;          // numbers per state
inline constexpr double kHighThreshold = 40.0; // P_H, the smallest High number

/// Data-based priority number P_d together with its state band.
/// Low owns 0..19, Middle 20..39, High 40..59.
class DataPriority {
public:
    DataPriority() = default;

    /// Builds the priority for `state` from a per-device importance in 0..19.
    static DataPriority make(DataState state, int base_importance);
    /// Inverse of make(): infers the band from a raw number in 0..59.
    static DataPriority from_number(int number);

    DataState state() const { return state_; }
    int number() const { return number_; }
    int base_importance() const { return number_ - band_base(state_); }

    static int band_base(DataState state);

    friend bool operator==(const DataPriority&, const DataPriority&) = default;

private:
    DataPriority(DataState state, int number) : state_(state), number_(number) {}

    DataState state_ = DataState::Low;
    int number_ = 0;
};

/// Fig.-2 style transition. Exactly one flag set moves the device to Middle,
/// both move it to High, neither returns it to Low. The current state does
/// not constrain the target, so every transition is reversible.
DataPriority transition_data_state(const DataPriority& current, bool has_realtime_requirement,
                                   bool has_exception, int base_importance);

struct RatePriority {
    double value = 10.0;
    double floor = 1.0;
    double ceiling = 59.0; // N_r - 1 with N_r = 60
};

/// What the coordinator saw from one device during one superframe.
struct SuperframeObservation {
    int csma_hit_count = 0; // CAP channel-access attempts, successful or not
    int gts_hit_count = 0;  // delivered GTS requests plus frames sent in a GTS
    bool gts_active = false; // held a GTS or issued a GTS request

    bool csma_attempted() const { return csma_hit_count > 0; }
    bool gts_hit() const { return gts_hit_count > 0; }
};

struct RateUpdateParams {
    double lambda_csma_miss = 1.0;
    double lambda_gts_miss = 1.0;
    double lambda_csma_hit = 1.0;
    double lambda_gts_hit = 1.0;
    int hit_exponent_cap = 16;

    /// Throws ConfigError unless every lambda is finite and positive.
    void validate() const;
};

/// Unclamped update: prev - M_csma - M_gts + H_csma + H_gts, where each miss
/// term applies only when the matching hit did not occur and hit terms scale
/// by 2^min(count, cap).
double raw_rate_update(double prev, const SuperframeObservation& obs, const RateUpdateParams& params);

/// raw_rate_update() clamped into [floor, ceiling]. Throws std::invalid_argument
/// for a non-finite or sub-floor previous value.
RatePriority update_rate_priority(const RatePriority& prev, const SuperframeObservation& obs,
                                  const RateUpdateParams& params);

/// Allocation-ranking value P_i: P_d in High, sqrt(P_d * P_r) in Middle, P_r in Low.
double effective_priority(const DataPriority& data, const RatePriority& rate);

} // namespace gtsim
