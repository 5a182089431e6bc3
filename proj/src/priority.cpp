#include "gtsim/priority.hpp"

#include "gtsim/error.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace gtsim {

std::string_view to_string(DataState state)
{
    switch (state) {
    case DataState::Low:
        return "low";
    case DataState::Middle:
        return "middle";
    case DataState::High:
        return "high";
    }
    return "?";
}

int DataPriority::band_base(DataState state)
{
    switch (state) {
    case DataState::Low:
        return 0;
    case DataState::Middle:
        return kBandWidth;
    case DataState::High:
        return 2 * kBandWidth;
    }
    return 0;
}

DataPriority DataPriority::make(DataState state, int base_importance)
{
    if (base_importance < 0 || base_importance >= kBandWidth) {
        throw std::invalid_argument("base importance must lie in 0..19, got " +
                                    std::to_string(base_importance));
    }
    return DataPriority(state, band_base(state) + base_importance);
}

DataPriority DataPriority::from_number(int number)
{
    if (number < 0 || number >= kDataPriorityLevels) {
        throw std::invalid_argument("data priority must lie in 0..59, got " + std::to_string(number));
    }
    const auto state = static_cast<DataState>(number / kBandWidth);
    return DataPriority(state, number);
}

DataPriority transition_data_state(const DataPriority& /*current*/, bool has_realtime_requirement,
                                   bool has_exception, int base_importance)
{
    DataState next = DataState::Low;
    if (has_realtime_requirement && has_exception) {
        next = DataState::High;
    } else if (has_realtime_requirement || has_exception) {
        next = DataState::Middle;
    }
    return DataPriority::make(next, base_importance);
}

void RateUpdateParams::validate() const
{
    for (double l : {lambda_csma_miss, lambda_gts_miss, lambda_csma_hit, lambda_gts_hit}) {
        if (!std::isfinite(l) || l <= 0.0) {
            throw ConfigError("rate-update lambdas must be finite and > 0");
        }
    }
    if (hit_exponent_cap < 0) {
        throw ConfigError("hit_exponent_cap must be non-negative");
    }
}

double raw_rate_update(double prev, const SuperframeObservation& obs, const RateUpdateParams& params)
{
    if (!std::isfinite(prev) || prev <= 0.0) {
        throw std::invalid_argument("previous rate priority must be finite and positive");
    }
    double next = prev;
    if (obs.csma_attempted()) {
        const int k = std::min(obs.csma_hit_count, params.hit_exponent_cap);
        next += params.lambda_csma_hit / prev * std::ldexp(1.0, k);
    } else {
        next -= params.lambda_csma_miss / prev;
    }
    if (obs.gts_hit()) {
        const int k = std::min(obs.gts_hit_count, params.hit_exponent_cap);
        next += params.lambda_gts_hit / prev * std::ldexp(1.0, k);
    } else {
        next -= params.lambda_gts_miss / prev;
    }
    return next;
}

RatePriority update_rate_priority(const RatePriority& prev, const SuperframeObservation& obs,
                                  const RateUpdateParams& params)
{
    if (!std::isfinite(prev.value)) {
        throw std::invalid_argument("rate priority is not finite");
    }
    if (prev.value < prev.floor) {
        throw std::invalid_argument("rate priority below its floor");
    }
    RatePriority next = prev;
    next.value = std::clamp(raw_rate_update(prev.value, obs, params), prev.floor, prev.ceiling);
    return next;
}

double effective_priority(const DataPriority& data, const RatePriority& rate)
{
    switch (data.state()) {
    case DataState::High:
        return data.number();
    case DataState::Middle:
        return std::sqrt(static_cast<double>(data.number()) * rate.value);
    case DataState::Low:
        return rate.value;
    }
    return rate.value;
}

} // namespace gtsim
