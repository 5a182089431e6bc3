#include "gtsim/engine.hpp"

#include "gtsim/error.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <queue>
#include <sstream>
#include <string>

namespace gtsim {

std::string_view to_string(CapMode mode)
{
    switch (mode) {
    case CapMode::Ideal:
        return "ideal";
    case CapMode::Bernoulli:
        return "bernoulli";
    case CapMode::Budget:
        return "budget";
    }
    return "?";
}

std::optional<CapMode> parse_cap_mode(std::string_view text)
{
    std::string lower;
    for (char c : text) {
        lower.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    }
    if (lower == "ideal") {
        return CapMode::Ideal;
    }
    if (lower == "bernoulli") {
        return CapMode::Bernoulli;
    }
    if (lower == "budget") {
        return CapMode::Budget;
    }
    return std::nullopt;
}

std::string_view to_string(EventKind kind)
{
    switch (kind) {
    case EventKind::Beacon:
        return "beacon";
    case EventKind::FrameArrival:
        return "arrival";
    case EventKind::CapRequestAttempt:
        return "cap-request";
    case EventKind::CfpSlotStart:
        return "cfp-slot";
    case EventKind::SimEnd:
        return "end";
    }
    return "?";
}

bool later(const SimEvent& a, const SimEvent& b)
{
    if (a.time != b.time) {
        return a.time > b.time;
    }
    if (a.kind != b.kind) {
        return a.kind > b.kind;
    }
    return a.sequence > b.sequence;
}

namespace {

constexpr std::int64_t kUnitBackoffSymbols = 20;

void require(bool ok, const std::string& message)
{
    if (!ok) {
        throw ConfigError(message);
    }
}

bool is_probability(double p)
{
    return p >= 0.0 && p <= 1.0;
}

} // namespace

void SimConfig::validate() const
{
    superframe.validate();
    require(duration_superframes >= 1, "duration must be at least one superframe");
    require(!devices.empty(), "at least one device is required");
    require(data_rate_bps > 0.0 && std::isfinite(data_rate_bps), "data rate must be positive");
    require(rate_floor > 0.0 && std::isfinite(rate_floor), "rate-priority floor must be > 0");
    require(rate_ceiling >= rate_floor && std::isfinite(rate_ceiling), "rate-priority ceiling below floor");
    rate.validate();
    thresholds.validate();
    require(artgas_idle_limit >= 1, "artgas idle limit must be at least 1");
    require(backoff_exponent >= 0 && backoff_exponent <= 5, "backoff exponent must lie in 0..5");
    require(is_probability(cap.success_prob), "cap success probability must lie in [0, 1]");
    channel.path_loss.validate();
    channel.budget.validate();
    require(channel.frequency > 0.0, "frequency must be positive");

    const auto timing = derive_timing(superframe);
    for (std::size_t i = 0; i < devices.size(); ++i) {
        const auto& d = devices[i];
        const std::string who = "device " + std::to_string(i) + ": ";
        d.traffic.validate();
        require(d.buffer_frames >= 1, who + "buffer must hold at least one frame");
        require(d.base_importance >= 0 && d.base_importance < kBandWidth, who + "base importance outside 0..19");
        require(is_probability(d.realtime_prob), who + "realtime probability outside [0, 1]");
        require(is_probability(d.exception_prob), who + "exception probability outside [0, 1]");
        require(d.initial_rate >= rate_floor && d.initial_rate <= rate_ceiling,
                who + "initial rate priority outside [floor, ceiling]");
        require(!d.phase_s || *d.phase_s >= 0.0, who + "phase must be non-negative");
        require(d.active_until_s >= 0.0, who + "active_until must be non-negative");
        require(d.scenario >= 0, who + "scenario label must be non-negative");
        if (cap.mode == CapMode::Budget) {
            require(d.distance_mm >= 150.0 && d.distance_mm <= 1000.0, who + "distance outside 150..1000 mm");
        }
        require(slot_capacity_frames(timing, data_rate_bps, d.traffic.frame_bytes) >= 1,
                who + "a GTS slot is too short for one frame");
    }
}

CapAttempt cap_attempt(const DeviceSpec& device, const CapModel& model, const ChannelState& channel,
                       RandomStream& stream)
{
    CapAttempt a;
    a.attempted = true;
    switch (model.mode) {
    case CapMode::Ideal:
        a.delivered = true;
        break;
    case CapMode::Bernoulli:
        a.delivered = stream.bernoulli(model.success_prob);
        break;
    case CapMode::Budget: {
        const double shadow = stream.normal(0.0, channel.path_loss.shadow_sigma_db);
        const double pl = path_loss_db(device.distance_mm, channel.frequency, channel.path_loss, shadow);
        a.delivered = cap_frame_received(pl, channel.budget);
        break;
    }
    }
    return a;
}

int slot_capacity_frames(const SuperframeTiming& timing, double data_rate_bps, int frame_bytes)
{
    const double slot_seconds = timing.sd_seconds / kNumSlots;
    return static_cast<int>(std::floor(slot_seconds * data_rate_bps / (8.0 * frame_bytes)));
}

std::vector<Frame> cfp_transmit(DeviceQueue& queue, int capacity)
{
    std::vector<Frame> sent;
    while (static_cast<int>(sent.size()) < capacity) {
        auto f = queue.dequeue();
        if (!f) {
            break;
        }
        sent.push_back(*f);
    }
    return sent;
}

namespace {

struct DeviceRuntime {
    DeviceQueue queue;
    DataPriority data;
    RatePriority rate;
    SuperframeObservation obs;
    bool request_scheduled = false; // at most one CAP attempt per superframe
    bool used_gts = false;
    RandomStream arrivals;
    RandomStream backoff;
    RandomStream cap;
    RandomStream markers;
    double next_arrival_s = 0.0;
    std::uint64_t periodic_index = 0;
    double phase_s = 0.0;
};

class Simulator {
public:
    explicit Simulator(const SimConfig& config)
        : config_(config),
          timing_(derive_timing(config.superframe)),
          scheme_(make_scheme(config.scheme, config.superframe, config.thresholds, config.artgas_idle_limit,
                              config.artgas_slot_order)),
          end_symbol_(config.duration_superframes * timing_.bi_symbols)
    {
        result_.ledger = MetricsLedger(config.devices.size(), config.record_frames);
        const auto n = config.devices.size();
        devices_.reserve(n);
        for (std::size_t i = 0; i < n; ++i) {
            const auto& spec = config.devices[i];
            const auto id = static_cast<std::uint64_t>(i);
            DeviceRuntime rt{DeviceQueue(spec.buffer_frames),
                             DataPriority::make(DataState::Low, spec.base_importance),
                             RatePriority{spec.initial_rate, config.rate_floor, config.rate_ceiling},
                             {},
                             false,
                             false,
                             RandomStream::derive(config.seed, id, StreamKind::Arrivals),
                             RandomStream::derive(config.seed, id, StreamKind::Backoff),
                             RandomStream::derive(config.seed, id, StreamKind::Cap),
                             RandomStream::derive(config.seed, id, StreamKind::Markers)};
            if (spec.arrival_mode == ArrivalMode::Periodic) {
                rt.phase_s = spec.phase_s ? *spec.phase_s : rt.arrivals.uniform() / spec.traffic.rate;
            }
            devices_.push_back(std::move(rt));
            result_.gamma += spec.traffic.rate;
        }
        frame_seconds_.reserve(n);
        for (const auto& spec : config.devices) {
            frame_seconds_.push_back(8.0 * spec.traffic.frame_bytes / config.data_rate_bps);
            slot_capacity_.push_back(slot_capacity_frames(timing_, config.data_rate_bps, spec.traffic.frame_bytes));
        }
    }

    SimResult run()
    {
        push(0, EventKind::Beacon, 0, 0);
        push(end_symbol_, EventKind::SimEnd, 0, config_.duration_superframes);
        for (DeviceId id = 0; id < devices_.size(); ++id) {
            schedule_next_arrival(id, 0.0);
        }
        while (!events_.empty()) {
            const SimEvent ev = events_.top();
            events_.pop();
            if (ev.kind == EventKind::SimEnd) {
                trace(ev, "");
                break;
            }
            dispatch(ev);
        }
        finish();
        return std::move(result_);
    }

private:
    double seconds(std::int64_t symbols) const { return static_cast<double>(symbols) / config_.superframe.symbol_rate; }

    std::int64_t symbols_at(double s) const
    {
        return static_cast<std::int64_t>(std::floor(s * config_.superframe.symbol_rate));
    }

    void push(std::int64_t time, EventKind kind, DeviceId device, std::int64_t superframe)
    {
        events_.push(SimEvent{time, kind, next_sequence_++, device, superframe});
    }

    void trace(const SimEvent& ev, std::string detail)
    {
        if (config_.record_trace) {
            result_.trace.push_back(TraceEntry{ev.time, ev.superframe, ev.kind, ev.device, std::move(detail)});
        }
    }

    void dispatch(const SimEvent& ev)
    {
        switch (ev.kind) {
        case EventKind::Beacon:
            on_beacon(ev);
            break;
        case EventKind::FrameArrival:
            on_arrival(ev);
            break;
        case EventKind::CapRequestAttempt:
            on_cap_attempt(ev);
            break;
        case EventKind::CfpSlotStart:
            on_cfp_slot(ev);
            break;
        case EventKind::SimEnd:
            break;
        }
    }

    void schedule_next_arrival(DeviceId id, double now_s)
    {
        auto& rt = devices_[id];
        const auto& spec = config_.devices[id];
        double t = 0.0;
        if (spec.arrival_mode == ArrivalMode::Poisson) {
            t = next_arrival(spec.traffic, now_s, rt.arrivals);
        } else {
            t = rt.phase_s + static_cast<double>(rt.periodic_index++) / spec.traffic.rate;
        }
        if (t >= spec.active_until_s) {
            return;
        }
        const auto sym = symbols_at(t);
        if (sym >= end_symbol_) {
            return;
        }
        rt.next_arrival_s = t;
        push(sym, EventKind::FrameArrival, id, sym / timing_.bi_symbols);
    }

    // -- beacon -----------------------------------------------------------

    void on_beacon(const SimEvent& ev)
    {
        const std::int64_t sf = ev.superframe;
        current_sf_ = sf;
        sf_start_ = ev.time;

        UsageMap usage;
        for (const auto& d : table_.descriptors()) {
            usage[d.device] = devices_[d.device].used_gts;
        }
        if (sf > 0 && config_.scheme == SchemeKind::ArtGas) {
            for (auto& rt : devices_) {
                rt.rate = update_rate_priority(rt.rate, rt.obs, config_.rate);
            }
        }
        for (DeviceId id = 0; id < devices_.size(); ++id) {
            auto& rt = devices_[id];
            const auto& spec = config_.devices[id];
            const bool realtime = rt.markers.bernoulli(spec.realtime_prob);
            const bool exception = rt.markers.bernoulli(spec.exception_prob);
            rt.data = transition_data_state(rt.data, realtime, exception, spec.base_importance);
        }

        std::vector<DevicePriorityView> priorities;
        priorities.reserve(devices_.size());
        for (DeviceId id = 0; id < devices_.size(); ++id) {
            const auto& rt = devices_[id];
            priorities.push_back(DevicePriorityView{id, rt.data.state(), effective_priority(rt.data, rt.rate)});
        }

        BeaconContext context{pending_requests_, priorities, &usage};
        const BeaconDecision decision = scheme_->on_beacon(context, table_);
        pending_requests_.clear();

        for (DeviceId id : decision.revoked) {
            result_.gts_log.push_back(GtsEvent{sf, id, GtsAction::Revoked});
            result_.ledger.on_revocation(id);
        }
        for (const auto& g : decision.allocation.grants) {
            result_.gts_log.push_back(GtsEvent{sf, g.device, GtsAction::Granted});
            result_.ledger.on_grant(g.device);
        }
        for (DeviceId id : decision.allocation.rejects) {
            result_.gts_log.push_back(GtsEvent{sf, id, GtsAction::Rejected});
        }

        for (auto& rt : devices_) {
            rt.obs = SuperframeObservation{};
            rt.request_scheduled = false;
            rt.used_gts = false;
        }

        const auto split = table_.split(config_.superframe);
        cap_start_ = sf_start_ + timing_.slot_symbols;
        cap_end_ = sf_start_ + split.cfp_start_slot * timing_.slot_symbols;

        std::ostringstream detail;
        detail << "gts=[";
        bool first = true;
        for (const auto& d : table_.descriptors()) {
            devices_[d.device].obs.gts_active = true;
            result_.ledger.on_slot_allocated(d.device);
            push(sf_start_ + d.start_slot * timing_.slot_symbols, EventKind::CfpSlotStart, d.device, sf);
            detail << (first ? "" : ",") << d.device << "@" << d.start_slot;
            first = false;
        }
        detail << "]";
        trace(ev, detail.str());

        for (DeviceId id = 0; id < devices_.size(); ++id) {
            if (!devices_[id].queue.empty() && !table_.holds(id)) {
                schedule_request(id, cap_start_);
            }
        }

        if (sf + 1 < config_.duration_superframes) {
            push(sf_start_ + timing_.bi_symbols, EventKind::Beacon, 0, sf + 1);
        }
    }

    void schedule_request(DeviceId id, std::int64_t earliest)
    {
        auto& rt = devices_[id];
        if (rt.request_scheduled) {
            return;
        }
        const auto window = std::uint64_t{1} << config_.backoff_exponent;
        const auto at = earliest + static_cast<std::int64_t>(rt.backoff.below(window)) * kUnitBackoffSymbols;
        if (at >= cap_end_) {
            return; // retried from the next beacon
        }
        rt.request_scheduled = true;
        rt.obs.gts_active = true;
        push(at, EventKind::CapRequestAttempt, id, current_sf_);
    }

    // -- arrivals and CAP ---------------------------------------------------

    void on_arrival(const SimEvent& ev)
    {
        auto& rt = devices_[ev.device];
        const double generated_at = rt.next_arrival_s;
        const Frame frame{next_frame_id_++, generated_at};
        result_.ledger.on_generated(ev.device);
        const bool accepted = rt.queue.enqueue(frame);
        if (!accepted) {
            result_.ledger.on_dropped(ev.device);
        }
        trace(ev, (accepted ? "frame=" : "dropped=") + std::to_string(frame.id) +
                      " q=" + std::to_string(rt.queue.size()));
        schedule_next_arrival(ev.device, generated_at);

        if (accepted && !table_.holds(ev.device) && ev.time >= cap_start_ && ev.time < cap_end_) {
            schedule_request(ev.device, ev.time);
        }
    }

    void on_cap_attempt(const SimEvent& ev)
    {
        auto& rt = devices_[ev.device];
        const auto attempt = cap_attempt(config_.devices[ev.device], config_.cap, config_.channel, rt.cap);
        if (attempt.attempted) {
            ++rt.obs.csma_hit_count;
        }
        if (attempt.delivered) {
            ++rt.obs.gts_hit_count;
            pending_requests_.push_back(GtsRequest{ev.device, 1, ev.superframe, ev.time, false});
        }
        trace(ev, attempt.delivered ? "delivered" : "lost");
    }

    // -- CFP ------------------------------------------------------------------

    void on_cfp_slot(const SimEvent& ev)
    {
        auto& rt = devices_[ev.device];
        const auto sent = cfp_transmit(rt.queue, slot_capacity_[ev.device]);
        const double slot_start = seconds(ev.time);
        const double airtime = frame_seconds_[ev.device];
        for (std::size_t k = 0; k < sent.size(); ++k) {
            const double tx_start = slot_start + static_cast<double>(k) * airtime;
            result_.ledger.on_delivered(ev.device, sent[k].generated_at, tx_start, tx_start + airtime);
        }
        rt.obs.gts_hit_count += static_cast<int>(sent.size());
        rt.used_gts = !sent.empty();
        if (rt.used_gts) {
            result_.ledger.on_slot_used(ev.device);
        }
        trace(ev, "sent=" + std::to_string(sent.size()) + " q=" + std::to_string(rt.queue.size()));
    }

    void finish()
    {
        result_.ledger.set_horizon(config_.duration_superframes,
                                   static_cast<double>(config_.duration_superframes) * timing_.bi_seconds);
        result_.devices.reserve(devices_.size());
        for (DeviceId id = 0; id < devices_.size(); ++id) {
            const auto& rt = devices_[id];
            result_.devices.push_back(DeviceFinalState{rt.data, rt.rate, table_.holds(id), rt.queue.size()});
            result_.frames_in_queues += rt.queue.size();
        }
    }

    const SimConfig& config_;
    SuperframeTiming timing_;
    std::unique_ptr<AllocationScheme> scheme_;
    std::int64_t end_symbol_;
    std::vector<DeviceRuntime> devices_;
    std::vector<double> frame_seconds_;
    std::vector<int> slot_capacity_;
    GtsTable table_;
    std::vector<GtsRequest> pending_requests_;
    std::priority_queue<SimEvent, std::vector<SimEvent>, decltype(&later)> events_{&later};
    std::uint64_t next_sequence_ = 0;
    std::uint64_t next_frame_id_ = 0;
    std::int64_t current_sf_ = 0;
    std::int64_t sf_start_ = 0;
    std::int64_t cap_start_ = 0;
    std::int64_t cap_end_ = 0;
    SimResult result_;
};

} // namespace

SimResult run(const SimConfig& config)
{
    config.validate();
    return Simulator(config).run();
}

} // namespace gtsim
