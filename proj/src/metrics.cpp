#include "gtsim/metrics.hpp"

#include "gtsim/superframe.hpp"

#include <stdexcept>

namespace gtsim {

MetricsLedger::MetricsLedger(std::size_t devices, bool keep_frames)
    : devices_(devices), keep_frames_(keep_frames)
{
}

void MetricsLedger::on_generated(DeviceId device)
{
    ++totals_.frames_generated;
    ++devices_.at(device).frames_generated;
}

void MetricsLedger::on_dropped(DeviceId device)
{
    ++totals_.frames_dropped;
    ++devices_.at(device).frames_dropped;
}

void MetricsLedger::on_delivered(DeviceId device, double generated_at, double tx_start, double rx_end)
{
    auto& d = devices_.at(device);
    for (DeviceMetrics* m : {&totals_, &d}) {
        ++m->frames_delivered;
        m->sum_delay_s += rx_end - generated_at;
        m->sum_wait_s += tx_start - generated_at;
    }
    if (keep_frames_) {
        frames_.push_back(FrameRecord{device, generated_at, tx_start, rx_end});
    }
}

void MetricsLedger::on_slot_allocated(DeviceId device)
{
    ++totals_.cfp_slots_allocated;
    ++devices_.at(device).cfp_slots_allocated;
}

void MetricsLedger::on_slot_used(DeviceId device)
{
    ++totals_.cfp_slots_used;
    ++devices_.at(device).cfp_slots_used;
}

void MetricsLedger::on_grant(DeviceId device)
{
    ++totals_.gts_grants;
    ++devices_.at(device).gts_grants;
}

void MetricsLedger::on_revocation(DeviceId device)
{
    ++totals_.gts_revocations;
    ++devices_.at(device).gts_revocations;
}

void MetricsLedger::set_horizon(std::int64_t superframes, double horizon_s)
{
    superframes_ = superframes;
    horizon_s_ = horizon_s;
}

DeviceMetrics MetricsLedger::aggregate(std::span<const DeviceId> ids) const
{
    DeviceMetrics sum;
    for (DeviceId id : ids) {
        const auto& d = devices_.at(id);
        sum.frames_generated += d.frames_generated;
        sum.frames_delivered += d.frames_delivered;
        sum.frames_dropped += d.frames_dropped;
        sum.sum_delay_s += d.sum_delay_s;
        sum.sum_wait_s += d.sum_wait_s;
        sum.cfp_slots_allocated += d.cfp_slots_allocated;
        sum.cfp_slots_used += d.cfp_slots_used;
        sum.gts_grants += d.gts_grants;
        sum.gts_revocations += d.gts_revocations;
    }
    return sum;
}

bool operator==(const DeviceMetrics& a, const DeviceMetrics& b)
{
    return a.frames_generated == b.frames_generated && a.frames_delivered == b.frames_delivered &&
           a.frames_dropped == b.frames_dropped && a.sum_delay_s == b.sum_delay_s &&
           a.sum_wait_s == b.sum_wait_s && a.cfp_slots_allocated == b.cfp_slots_allocated &&
           a.cfp_slots_used == b.cfp_slots_used && a.gts_grants == b.gts_grants &&
           a.gts_revocations == b.gts_revocations;
}

bool operator==(const MetricsLedger& a, const MetricsLedger& b)
{
    if (!(a.totals_ == b.totals_) || a.devices_.size() != b.devices_.size() ||
        a.superframes_ != b.superframes_ || a.horizon_s_ != b.horizon_s_ ||
        a.frames_.size() != b.frames_.size()) {
        return false;
    }
    for (std::size_t i = 0; i < a.devices_.size(); ++i) {
        if (!(a.devices_[i] == b.devices_[i])) {
            return false;
        }
    }
    for (std::size_t i = 0; i < a.frames_.size(); ++i) {
        const auto& x = a.frames_[i];
        const auto& y = b.frames_[i];
        if (x.device != y.device || x.generated_at != y.generated_at || x.tx_start != y.tx_start ||
            x.rx_end != y.rx_end) {
            return false;
        }
    }
    return true;
}

double success_probability(std::uint64_t frames_delivered, double gamma, double horizon_s)
{
    if (!(horizon_s > 0.0)) {
        throw std::invalid_argument("horizon must be positive");
    }
    if (!(gamma > 0.0)) {
        throw std::invalid_argument("offered load must be positive");
    }
    return static_cast<double>(frames_delivered) / horizon_s / gamma;
}

Summary summarize(const DeviceMetrics& m, double gamma, double horizon_s, std::int64_t superframes,
                  BandwidthMode mode)
{
    Summary s;
    s.success_prob = success_probability(m.frames_delivered, gamma, horizon_s);
    s.frames_generated = m.frames_generated;
    s.frames_delivered = m.frames_delivered;
    s.frames_dropped = m.frames_dropped;
    if (m.frames_delivered > 0) {
        const double n = static_cast<double>(m.frames_delivered);
        s.avg_delay_s = m.sum_delay_s / n;
        s.avg_wait_s = m.sum_wait_s / n;
    }
    if (mode == BandwidthMode::Allocated) {
        if (m.cfp_slots_allocated > 0) {
            s.bandwidth_util =
                static_cast<double>(m.cfp_slots_used) / static_cast<double>(m.cfp_slots_allocated);
        }
    } else if (superframes > 0) {
        s.bandwidth_util = static_cast<double>(m.cfp_slots_used) /
                           (static_cast<double>(superframes) * kNumSlots);
    }
    return s;
}

} // namespace gtsim
