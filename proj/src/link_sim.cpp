#include "eeesim/link_sim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>

#include "eeesim/selfsim.hpp"

namespace eeesim {

const char* link_state_name(LinkState s) {
    switch (s) {
    case LinkState::Active: return "active";
    case LinkState::GoingToSleep: return "going_to_sleep";
    case LinkState::Quiet: return "quiet";
    case LinkState::Waking: return "waking";
    case LinkState::Refresh: return "refresh";
    }
    return "?";
}

LinkState advance_state(LinkState state, LinkEvent event) {
    switch (event) {
    case LinkEvent::SleepRequest:
        if (state == LinkState::Active) return LinkState::GoingToSleep;
        break;
    case LinkEvent::SleepDone:
        if (state == LinkState::GoingToSleep) return LinkState::Quiet;
        break;
    case LinkEvent::WakeRequest:
        if (state == LinkState::Quiet) return LinkState::Waking;
        break;
    case LinkEvent::WakeDone:
        if (state == LinkState::Waking) return LinkState::Active;
        break;
    case LinkEvent::RefreshStart:
        if (state == LinkState::Quiet) return LinkState::Refresh;
        break;
    case LinkEvent::RefreshEnd:
        if (state == LinkState::Refresh) return LinkState::Quiet;
        break;
    }
    throw std::logic_error(std::string("illegal link transition from ") + link_state_name(state));
}

Ns LinkParams::serialization_ns(Bits bits) const {
    return static_cast<Ns>(std::llround(static_cast<double>(bits) * 1e9 / line_rate_bps));
}

void LinkParams::validate() const {
    if (!(line_rate_bps > 0.0)) throw std::invalid_argument("link: line rate must be > 0");
    if (t_s < 0 || t_w < 0 || t_r < 0 || refresh_period <= 0)
        throw std::invalid_argument("link: bad transition/refresh timings");
    if (!(pw_on_w > pw_off_w) || pw_off_w < 0.0)
        throw std::invalid_argument("link: need pw_on > pw_off >= 0");
}

void StrategyConfig::validate() const {
    if (t_burst <= 0) throw std::invalid_argument("strategy: T_B must be > 0");
    if (window_T <= 0 || t_prime <= 0 || t_prime >= window_T)
        throw std::invalid_argument("strategy: need 0 < T' < T");
    if (window_T % t_burst != 0 || t_prime % t_burst != 0)
        throw std::invalid_argument("strategy: T and T' must be multiples of T_B");
    prediction.validate();
}

double energy_accumulate(const StateResidency& residency, const LinkParams& params) {
    for (const Ns r : residency)
        if (r < 0) throw std::invalid_argument("energy_accumulate: negative residency");
    const Ns quiet = residency[static_cast<std::size_t>(LinkState::Quiet)];
    Ns powered = 0;
    for (std::size_t i = 0; i < kLinkStateCount; ++i)
        if (i != static_cast<std::size_t>(LinkState::Quiet)) powered += residency[i];
    return ns_to_s(quiet) * params.pw_off_w + ns_to_s(powered) * params.pw_on_w;
}

namespace {

constexpr Ns kFarFuture = std::numeric_limits<Ns>::max() / 4;

// Sequential walker over one link. Time is accounted in contiguous spans
// clipped to [0, duration); `cursor` marks the accounted-up-to instant and
// between operations the link is either Quiet or Active.
class LinkWalker {
public:
    LinkWalker(const TrafficTrace& trace, const LinkParams& params, bool refresh_enabled,
               const SimHooks& hooks)
        : events_(trace.events), params_(params), duration_(trace.duration),
          refresh_enabled_(refresh_enabled), hooks_(hooks) {}

    // --- packet bookkeeping -------------------------------------------------

    bool work_before(Ns limit) const {
        return next_service_ < events_.size() && events_[next_service_].arrival_time < limit;
    }

    // Boundary of the burst unit right after the next unserved arrival.
    Ns next_work_boundary(Ns t_burst) const {
        if (next_service_ >= events_.size()) return kFarFuture;
        const Ns a = events_[next_service_].arrival_time;
        return (a / t_burst + 1) * t_burst;
    }

    // Serves packets with arrival < limit_arrival, FIFO, starting no earlier
    // than `start` nor before each packet's arrival; stops before any packet
    // whose completion would pass hard_stop. Returns the service end.
    Ns serve(Ns limit_arrival, Ns start, Ns hard_stop) {
        Ns t = start;
        while (next_service_ < events_.size() &&
               events_[next_service_].arrival_time < limit_arrival) {
            const PacketEvent& ev = events_[next_service_];
            const Ns begin = std::max(t, ev.arrival_time);
            const Ns end = begin + params_.serialization_ns(ev.size);
            if (end > hard_stop) break;
            t = end;
            bits_tx_ += ev.size;
            pkts_tx_++;
            max_delay_ = std::max(max_delay_, end - ev.arrival_time);
            if (hooks_.completions) hooks_.completions->push_back(end);
            next_service_++;
        }
        return t;
    }

    Bits pending_bits_before(Ns limit) const {
        Bits sum = 0;
        for (std::size_t i = next_service_; i < events_.size(); ++i) {
            if (events_[i].arrival_time >= limit) break;
            sum += events_[i].size;
        }
        return sum;
    }

    // --- state/residency ----------------------------------------------------

    void add(LinkState s, Ns from, Ns to) {
        from = std::clamp<Ns>(from, 0, duration_);
        to = std::clamp<Ns>(to, 0, duration_);
        if (to > from) residency_[static_cast<std::size_t>(s)] += to - from;
    }

    // Quiet span with optional refresh pulses carved out of it. The refresh
    // phase restarts at each span begin.
    void add_quiet(Ns from, Ns to) {
        from = std::clamp<Ns>(from, 0, duration_);
        to = std::clamp<Ns>(to, 0, duration_);
        if (to <= from) return;
        const Ns span = to - from;
        if (!refresh_enabled_ || params_.t_r == 0) {
            residency_[static_cast<std::size_t>(LinkState::Quiet)] += span;
            return;
        }
        const Ns cycle = params_.refresh_period + params_.t_r;
        const Ns full = span / cycle;
        const Ns rem = span - full * cycle;
        const Ns extra = std::clamp<Ns>(rem - params_.refresh_period, 0, params_.t_r);
        const Ns refresh = full * params_.t_r + extra;
        residency_[static_cast<std::size_t>(LinkState::Refresh)] += refresh;
        residency_[static_cast<std::size_t>(LinkState::Quiet)] += span - refresh;
    }

    // Wakes the link (if quiet) so service can start at boundary b, then
    // serves everything that arrived before b. Spills past the unit freely.
    void serve_boundary(Ns b) {
        if (state_ == LinkState::Quiet) {
            const Ns wake_start = std::max(b - params_.t_w, cursor_);
            add_quiet(cursor_, wake_start);
            add(LinkState::Waking, wake_start, wake_start + params_.t_w);
            cursor_ = wake_start + params_.t_w;
            state_ = LinkState::Active;
        } else if (cursor_ < b) {
            add(LinkState::Active, cursor_, b); // idle-active gap
            cursor_ = b;
        }
        const Ns svc_start = std::max(cursor_, b);
        const Ns svc_end = serve(b, svc_start, duration_);
        add(LinkState::Active, cursor_, svc_end);
        cursor_ = std::max(cursor_, svc_end);
    }

    // Sleeps now if the full transition fits before the link must be active
    // again; otherwise stays active and lets the cycles merge.
    bool sleep_until(Ns next_active_t) {
        if (cursor_ + params_.t_s <= next_active_t - params_.t_w) {
            add(LinkState::GoingToSleep, cursor_, cursor_ + params_.t_s);
            cursor_ += params_.t_s;
            state_ = LinkState::Quiet;
            return true;
        }
        return false;
    }

    // A unit is overloaded when its own arrivals plus the transitions do not
    // fit the unit. Backlog carried in from earlier (a predictive tail that
    // fell short) merely spills and is reported as window delay instead.
    void flag_if_overloaded(Ns b, Ns t_burst) {
        Ns own = 0;
        for (std::size_t i = next_service_; i < events_.size(); ++i) {
            const Ns at = events_[i].arrival_time;
            if (at >= b) break;
            if (at >= b - t_burst) own += params_.serialization_ns(events_[i].size);
        }
        if (own + params_.t_trans() > t_burst) overload_units_++;
    }

    // Plain burst-transmission cycles at boundaries first_b, first_b+T_B, ...,
    // up to and including last_b (boundaries at or past the trace end are
    // meaningless and skipped).
    void run_burst_boundaries(Ns first_b, Ns last_b, Ns t_burst, bool faithful) {
        for (Ns b = first_b; b <= last_b && b < duration_; b += t_burst) {
            const bool have_work = work_before(b);
            if (!have_work && !faithful && state_ == LinkState::Quiet) continue;
            flag_if_overloaded(b, t_burst);
            serve_boundary(b);
            const Ns next_active = faithful ? b + t_burst : next_work_boundary(t_burst);
            sleep_until(next_active);
        }
    }

    // Trailing sleep plus quiet fill up to the trace end.
    void finalize() {
        if (state_ == LinkState::Active) {
            add(LinkState::GoingToSleep, cursor_, cursor_ + params_.t_s);
            cursor_ += params_.t_s;
            state_ = LinkState::Quiet;
        }
        add_quiet(cursor_, duration_);
        cursor_ = duration_;
        Ns total = 0;
        for (const Ns r : residency_) total += r;
        if (total != duration_)
            throw std::logic_error("link_sim: state residency does not partition the run");
    }

    const std::vector<PacketEvent>& events_;
    const LinkParams& params_;
    const Ns duration_;
    const bool refresh_enabled_;
    const SimHooks& hooks_;

    StateResidency residency_{};
    Ns cursor_ = 0;
    LinkState state_ = LinkState::Quiet;
    std::size_t next_service_ = 0;
    Bits bits_tx_ = 0;
    std::int64_t pkts_tx_ = 0;
    Ns max_delay_ = 0;
    std::int64_t overload_units_ = 0;
};

SimResult assemble_result(const TrafficTrace& trace, const LinkParams& params, LinkWalker& w) {
    SimResult r;
    r.residency_ns = w.residency_;
    r.quiet_fraction_p =
        trace.duration > 0
            ? static_cast<double>(w.residency_[static_cast<std::size_t>(LinkState::Quiet)]) /
                  static_cast<double>(trace.duration)
            : 0.0;
    r.energy_j = energy_accumulate(w.residency_, params);
    r.total_bits_arrived = trace.total_bits();
    r.bits_transmitted = w.bits_tx_;
    r.bits_queued_end = r.total_bits_arrived - w.bits_tx_;
    r.packets_arrived = static_cast<std::int64_t>(trace.events.size());
    r.packets_transmitted = w.pkts_tx_;
    r.max_packet_delay_s = ns_to_s(w.max_delay_);
    r.overload_units = w.overload_units_;
    r.duration_s = trace.duration_s();
    return r;
}

// Per-burst-unit arrival bits plus prefix sums, shared by the learning and
// measurement paths of the predictive run.
struct UnitBins {
    std::vector<Bits> bits;
    std::vector<Bits> prefix; // prefix[i] = sum of bits[0..i)

    UnitBins(const TrafficTrace& trace, Ns t_burst) {
        const std::int64_t units = trace.duration / t_burst;
        bits.assign(static_cast<std::size_t>(units), 0);
        for (const auto& e : trace.events) {
            const std::int64_t idx = e.arrival_time / t_burst;
            if (idx < units) bits[static_cast<std::size_t>(idx)] += e.size;
        }
        prefix.assign(bits.size() + 1, 0);
        for (std::size_t i = 0; i < bits.size(); ++i) prefix[i + 1] = prefix[i] + bits[i];
    }

    Bits sum(std::int64_t from_unit, std::int64_t to_unit) const {
        return prefix[static_cast<std::size_t>(to_unit)] -
               prefix[static_cast<std::size_t>(from_unit)];
    }
};

std::optional<double> try_estimate_hurst(const std::vector<Bits>& bins, std::int64_t n_units,
                                         double tick_s) {
    LoadSeries s;
    s.tick_s = tick_s;
    s.values.reserve(static_cast<std::size_t>(n_units));
    for (std::int64_t i = 0; i < n_units; ++i)
        s.values.push_back(static_cast<double>(bins[static_cast<std::size_t>(i)]));
    try {
        return estimate_hurst(s).h_clamped;
    } catch (const std::exception&) {
        return std::nullopt; // not enough usable data yet
    }
}

} // namespace

SimResult run_always_on(const TrafficTrace& trace, const LinkParams& params,
                        const SimHooks& hooks) {
    params.validate();
    trace.validate();
    LinkWalker w(trace, params, false, hooks);
    w.state_ = LinkState::Active;
    w.serve(kFarFuture, 0, trace.duration);
    w.add(LinkState::Active, 0, trace.duration);
    w.cursor_ = trace.duration;
    SimResult r = assemble_result(trace, params, w);
    return r;
}

SimResult run_eee_burst(const TrafficTrace& trace, const LinkParams& params,
                        const StrategyConfig& cfg, const SimHooks& hooks) {
    params.validate();
    cfg.validate();
    trace.validate();
    if (cfg.t_burst <= params.t_trans())
        throw std::invalid_argument("run_eee_burst: need T_B > t_s + t_w");

    LinkWalker w(trace, params, cfg.refresh_enabled, hooks);
    w.run_burst_boundaries(cfg.t_burst, trace.duration, cfg.t_burst, cfg.model_faithful_eee);
    w.finalize();

    SimResult r = assemble_result(trace, params, w);
    const std::int64_t k_win = trace.duration / cfg.window_T;
    r.windows.reserve(static_cast<std::size_t>(k_win));
    for (std::int64_t i = 0; i < k_win; ++i)
        r.windows.push_back({i, Strategy::EEE, 0.0, 0.0, 0, -1.0});
    return r;
}

SimResult run_eeep(const TrafficTrace& trace, const LinkParams& params, const StrategyConfig& cfg,
                   const SimHooks& hooks) {
    params.validate();
    cfg.validate();
    trace.validate();
    if (cfg.t_burst <= params.t_trans())
        throw std::invalid_argument("run_eeep: need T_B > t_s + t_w");

    const Ns T = cfg.window_T;
    const Ns TP = cfg.t_prime;
    const Ns TB = cfg.t_burst;
    const std::int64_t units_per_window = T / TB;
    const std::int64_t units_t1 = TP / TB;
    const std::int64_t k_win = trace.duration / T;
    const bool faithful = cfg.model_faithful_eee;
    const PredictionConfig& pc = cfg.prediction;

    LinkWalker w(trace, params, cfg.refresh_enabled, hooks);
    UnitBins bins(trace, TB);

    CondProbTable table(pc.levels);
    QuantizerState quant;
    quant.levels = pc.levels;

    bool setup_done = false;
    std::optional<double> h_now;
    int windows_since_recheck = 0;
    Bits carried_in = 0;

    std::vector<WindowRecord> records;
    records.reserve(static_cast<std::size_t>(k_win));
    std::int64_t eeep_windows = 0;
    std::int64_t delayed_windows = 0;
    double tau_sum_s = 0.0;

    for (std::int64_t wi = 0; wi < k_win; ++wi) {
        const Ns w0 = wi * T;
        const Ns wp = w0 + TP;
        const Ns w1 = w0 + T;
        const std::int64_t u0 = wi * units_per_window;
        const Bits v1 = bins.sum(u0, u0 + units_t1);
        const Bits v2 = bins.sum(u0 + units_t1, u0 + units_per_window);

        // Decision at t = T': prediction from the table state before this
        // window, gated by the load comparison and the self-similarity check.
        bool use_tail = false;
        double predicted_bits = 0.0;
        TauEstimate tau{};
        if (setup_done) {
            const int l1 = quantize_level(static_cast<double>(v1), quant);
            const auto pred = expected_future_load(table, quant, l1);
            const double measured = static_cast<double>(v1 + carried_in);
            if (pred && *pred <= measured && h_now && *h_now > pc.h_bar) {
                use_tail = true;
                predicted_bits = *pred;
                tau = compute_tau(predicted_bits, params.line_rate_bps, pc.p_tau);
            }
        }

        Bits carried_out = 0;
        if (use_tail) {
            // EEE cycles across the leading interval; the cycle at T' drains
            // the last leading unit before the link is put to sleep.
            w.run_burst_boundaries(w0 + TB, wp - TB, TB, faithful);
            if (faithful || w.work_before(wp) || w.state_ == LinkState::Active)
                w.serve_boundary(wp);

            const Ns tail_ns = s_to_ns(tau.tau_s + tau.delta_tau_s);
            const Ns active_at = std::max(wp, w1 - tail_ns);
            if (w.state_ == LinkState::Active) {
                // Stays active when the T' drain ran long or the tail spans
                // the whole trailing interval; the tail then starts at the
                // cursor instead of active_at.
                w.sleep_until(active_at);
            }
            if (w.state_ == LinkState::Quiet) {
                const Ns wake_start = std::max(active_at - params.t_w, w.cursor_);
                w.add_quiet(w.cursor_, wake_start);
                w.add(LinkState::Waking, wake_start, wake_start + params.t_w);
                w.cursor_ = wake_start + params.t_w;
                w.state_ = LinkState::Active;
            }
            // The tail is active by design up to the window end, idle or not.
            const Ns tail_start = w.cursor_;
            w.serve(w1, tail_start, std::min(w1, trace.duration));
            w.add(LinkState::Active, tail_start, w1);
            w.cursor_ = std::max(w.cursor_, w1);

            carried_out = w.pending_bits_before(w1);
            eeep_windows++;
            tau_sum_s += tau.tau_s;
            if (carried_out > 0) delayed_windows++;

            // Back to quiet before the next window's first burst cycle.
            const Ns next_cycle = faithful ? w1 + TB : w.next_work_boundary(TB);
            w.sleep_until(next_cycle);
        } else {
            w.run_burst_boundaries(w0 + TB, w1, TB, faithful);
        }

        // Learning update uses arrivals only; carried bits never train the table.
        observe_window(table, quant, {static_cast<double>(v1), static_cast<double>(v2)});
        if (!setup_done) {
            if (has_converged(table, pc.theta)) {
                setup_done = true;
                h_now = try_estimate_hurst(bins.bits, u0 + units_per_window, ns_to_s(TB));
                windows_since_recheck = 0;
            }
        } else if (++windows_since_recheck >= pc.hurst_recheck_windows) {
            h_now = try_estimate_hurst(bins.bits, u0 + units_per_window, ns_to_s(TB));
            windows_since_recheck = 0;
        }

        carried_in = carried_out;
        records.push_back({wi, use_tail ? Strategy::EEEP : Strategy::EEE, tau.tau_s,
                           tau.delta_tau_s, carried_out, h_now ? *h_now : -1.0});
    }

    // Remainder of the trace past the last full window runs plain EEE.
    w.run_burst_boundaries(k_win * T + TB, trace.duration, TB, faithful);
    w.finalize();

    SimResult r = assemble_result(trace, params, w);
    r.windows = std::move(records);
    if (k_win > 0) {
        r.u_fraction = static_cast<double>(eeep_windows) / static_cast<double>(k_win);
        r.delayed_window_fraction =
            static_cast<double>(delayed_windows) / static_cast<double>(k_win);
    }
    if (eeep_windows > 0) r.mean_tau_s = tau_sum_s / static_cast<double>(eeep_windows);
    return r;
}

TheoryInputs derive_theory_inputs(const TrafficTrace& trace, const LinkParams& params,
                                  const StrategyConfig& cfg, const SimResult* run) {
    TheoryInputs in;
    in.window_T = ns_to_s(cfg.window_T);
    in.t_prime = ns_to_s(cfg.t_prime);
    in.t_burst = ns_to_s(cfg.t_burst);
    in.t_trans = ns_to_s(params.t_trans());
    in.pw_on = params.pw_on_w;
    in.pw_off = params.pw_off_w;
    in.duration_L = trace.duration_s();

    const double units = static_cast<double>(trace.duration) / static_cast<double>(cfg.t_burst);
    in.n_bar = units > 0.0 ? static_cast<double>(trace.events.size()) / units : 0.0;
    in.t_pack_bar = trace.events.empty()
                        ? 1.0 / params.line_rate_bps // harmless placeholder for empty traces
                        : trace.mean_packet_bits() / params.line_rate_bps;
    if (run) {
        in.u = run->u_fraction;
        in.tau_bar = run->mean_tau_s;
        in.p_tau = cfg.prediction.p_tau;
    }
    return in;
}

} // namespace eeesim
