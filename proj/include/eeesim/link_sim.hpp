#ifndef EEESIM_LINK_SIM_HPP
#define EEESIM_LINK_SIM_HPP

#include <array>
#include <cstdint>
#include <vector>

#include "eeesim/predictor.hpp"
#include "eeesim/theory.hpp"
#include "eeesim/traffic.hpp"
#include "eeesim/units.hpp"

namespace eeesim {

enum class LinkState { Active = 0, GoingToSleep, Quiet, Waking, Refresh };
enum class LinkEvent { SleepRequest, SleepDone, WakeRequest, WakeDone, RefreshStart, RefreshEnd };

constexpr std::size_t kLinkStateCount = 5;
using StateResidency = std::array<Ns, kLinkStateCount>; // ns per state

const char* link_state_name(LinkState s);

// Legal transitions only; throws std::logic_error on an illegal pair.
LinkState advance_state(LinkState state, LinkEvent event);

struct LinkParams {
    double line_rate_bps = 1e9;
    Ns t_s = 202'000;               // sleep transition
    Ns t_w = 16'500;                // wake transition
    Ns t_r = 200'000;               // refresh pulse
    Ns refresh_period = 20'000'000; // quiet time between refresh pulses
    double pw_on_w = 0.697;
    double pw_off_w = 0.053;

    Ns t_trans() const { return t_s + t_w; }
    Ns serialization_ns(Bits bits) const;
    void validate() const;
};

struct StrategyConfig {
    Ns window_T = 100'000'000; // T
    Ns t_prime = 50'000'000;   // leading interval, 0 < T' < T
    Ns t_burst = 1'000'000;    // burst unit T_B; T and T' are multiples of it
    PredictionConfig prediction;
    bool model_faithful_eee = true; // wake/sleep every burst unit even when empty
    bool refresh_enabled = false;

    void validate() const;
};

enum class Strategy { EEE = 0, EEEP };

struct WindowRecord {
    std::int64_t index = 0;
    Strategy strategy_used = Strategy::EEE;
    double tau_s = 0.0;
    double delta_tau_s = 0.0;
    Bits carried_over_bits = 0;
    double h_hat_at_decision = -1.0; // -1 until the first estimate exists
};

struct SimResult {
    double quiet_fraction_p = 0.0;
    double energy_j = 0.0;
    Bits total_bits_arrived = 0;
    Bits bits_transmitted = 0;
    Bits bits_queued_end = 0;
    std::int64_t packets_arrived = 0;
    std::int64_t packets_transmitted = 0;
    StateResidency residency_ns{};
    std::vector<WindowRecord> windows;
    double u_fraction = 0.0;               // share of windows that used the predictive tail
    double delayed_window_fraction = 0.0;  // share of windows whose tail left unserved bits
    double max_packet_delay_s = 0.0;
    double mean_tau_s = 0.0;               // over predictive windows
    std::int64_t overload_units = 0;       // burst units whose cycle did not fit
    double duration_s = 0.0;

    bool overload() const { return overload_units > 0; }
};

// pw_off for quiet time, pw_on for everything else (transitions included).
double energy_accumulate(const StateResidency& residency, const LinkParams& params);

struct SimHooks {
    // completion time of every transmitted packet, in arrival order
    std::vector<Ns>* completions = nullptr;
};

SimResult run_always_on(const TrafficTrace& trace, const LinkParams& params,
                        const SimHooks& hooks = {});

SimResult run_eee_burst(const TrafficTrace& trace, const LinkParams& params,
                        const StrategyConfig& cfg, const SimHooks& hooks = {});

SimResult run_eeep(const TrafficTrace& trace, const LinkParams& params, const StrategyConfig& cfg,
                   const SimHooks& hooks = {});

// Closed-form inputs measured from a trace (and optionally a finished run,
// which contributes U and the mean predicted tail time).
TheoryInputs derive_theory_inputs(const TrafficTrace& trace, const LinkParams& params,
                                  const StrategyConfig& cfg, const SimResult* run = nullptr);

} // namespace eeesim

#endif
