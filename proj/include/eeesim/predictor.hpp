#ifndef EEESIM_PREDICTOR_HPP
#define EEESIM_PREDICTOR_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace eeesim {

// Equal-width quantizer over the traffic range learned so far. Level 1 is
// (0, v_min+mu), level h is [v_min+(h-1)mu, inf).
struct QuantizerState {
    double v_min = 0.0;
    double v_max = 0.0;
    int levels = 10; // h >= 2
    double mu = 0.0; // (v_max - v_min)/h
    bool initialized = false;
};

struct WindowObservation {
    double v1 = 0.0; // bits arrived in the leading interval of the window
    double v2 = 0.0; // bits arrived in the trailing interval
};

// Occurrence counts C and row-stochastic table P of next-interval level
// given current-interval level, updated once per completed window.
struct CondProbTable {
    int levels = 10;
    std::vector<std::int64_t> counts; // h*h, row-major
    std::vector<double> probs;        // h*h, rows sum to 1 where populated
    std::vector<double> last_probs;   // snapshot before the latest update
    std::int64_t updates = 0;

    explicit CondProbTable(int h = 10);
    std::int64_t count_at(int l1, int l2) const; // 1-based levels
    double prob_at(int l1, int l2) const;
    std::int64_t row_total(int l1) const;
};

struct PredictionConfig {
    double theta = 0.05;           // convergence threshold on per-row L1 distance
    double h_bar = 0.6;            // self-similarity gate
    int levels = 10;               // h
    double p_tau = 0.0;            // tail extension as a fraction of tau
    int hurst_recheck_windows = 50;

    void validate() const;
};

// Returns a level in [1, levels]; degenerate range (v_max == v_min or
// uninitialized) maps everything to level 1.
int quantize_level(double v, const QuantizerState& q);

// Widens the quantizer from obs.v1, recounts (l1, l2), renormalizes P.
// Existing counts are not re-binned when the edges move.
void observe_window(CondProbTable& table, QuantizerState& q, const WindowObservation& obs);

// True iff the table has been updated, at least one row is populated, and
// every populated row moved by at most theta (L1) since the last update.
bool has_converged(const CondProbTable& table, double theta);

// Expectation of the bin representative under row l1 of P: midpoints for
// interior bins, v_max for the open top bin. Empty row -> no prediction.
std::optional<double> expected_future_load(const CondProbTable& table, const QuantizerState& q,
                                           int l1);

struct TauEstimate {
    double tau_s = 0.0;
    double delta_tau_s = 0.0;
};

TauEstimate compute_tau(double expected_bits, double line_rate_bps, double p_tau);

// One row per current level, probabilities comma-separated.
void write_prob_table_csv(const CondProbTable& table, const std::string& path);

} // namespace eeesim

#endif
