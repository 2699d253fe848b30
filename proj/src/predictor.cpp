#include "eeesim/predictor.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

namespace eeesim {

CondProbTable::CondProbTable(int h) : levels(h) {
    if (h < 2) throw std::invalid_argument("CondProbTable: need at least 2 levels");
    counts.assign(static_cast<std::size_t>(h) * h, 0);
    probs.assign(static_cast<std::size_t>(h) * h, 0.0);
    last_probs.assign(static_cast<std::size_t>(h) * h, 0.0);
}

std::int64_t CondProbTable::count_at(int l1, int l2) const {
    return counts[static_cast<std::size_t>(l1 - 1) * levels + (l2 - 1)];
}

double CondProbTable::prob_at(int l1, int l2) const {
    return probs[static_cast<std::size_t>(l1 - 1) * levels + (l2 - 1)];
}

std::int64_t CondProbTable::row_total(int l1) const {
    std::int64_t sum = 0;
    for (int l2 = 1; l2 <= levels; ++l2) sum += count_at(l1, l2);
    return sum;
}

void PredictionConfig::validate() const {
    if (!(theta > 0.0)) throw std::invalid_argument("prediction: theta must be > 0");
    // h_bar == 1.0 is allowed as a degenerate gate that disables prediction
    if (!(h_bar >= 0.5) || !(h_bar <= 1.0))
        throw std::invalid_argument("prediction: h_bar must be in [0.5, 1]");
    if (levels < 2) throw std::invalid_argument("prediction: need at least 2 levels");
    if (p_tau < 0.0) throw std::invalid_argument("prediction: p_tau must be >= 0");
    if (hurst_recheck_windows < 1)
        throw std::invalid_argument("prediction: hurst_recheck_windows must be >= 1");
}

int quantize_level(double v, const QuantizerState& q) {
    if (v < 0.0) throw std::invalid_argument("quantize_level: traffic must be >= 0");
    if (!q.initialized || q.v_max <= q.v_min) return 1;
    const double idx = std::floor((v - q.v_min) / q.mu);
    if (idx < 1.0) return 1;                                 // everything below v_min + mu
    if (idx >= static_cast<double>(q.levels - 1)) return q.levels; // open top level
    return 1 + static_cast<int>(idx);
}

void observe_window(CondProbTable& table, QuantizerState& q, const WindowObservation& obs) {
    if (obs.v1 < 0.0 || obs.v2 < 0.0)
        throw std::invalid_argument("observe_window: traffic must be >= 0");
    if (q.levels != table.levels)
        throw std::invalid_argument("observe_window: quantizer/table level mismatch");

    // Range limits come from leading-interval sums only.
    if (!q.initialized) {
        q.v_min = q.v_max = obs.v1;
        q.initialized = true;
    } else {
        q.v_min = std::min(q.v_min, obs.v1);
        q.v_max = std::max(q.v_max, obs.v1);
    }
    q.mu = (q.v_max - q.v_min) / static_cast<double>(q.levels);

    const int l1 = quantize_level(obs.v1, q);
    const int l2 = quantize_level(obs.v2, q);

    table.last_probs = table.probs;
    table.counts[static_cast<std::size_t>(l1 - 1) * table.levels + (l2 - 1)]++;

    for (int row = 1; row <= table.levels; ++row) {
        const std::int64_t total = table.row_total(row);
        if (total == 0) continue;
        for (int col = 1; col <= table.levels; ++col) {
            table.probs[static_cast<std::size_t>(row - 1) * table.levels + (col - 1)] =
                static_cast<double>(table.count_at(row, col)) / static_cast<double>(total);
        }
    }
    table.updates++;
}

bool has_converged(const CondProbTable& table, double theta) {
    if (!(theta > 0.0)) throw std::invalid_argument("has_converged: theta must be > 0");
    if (table.updates == 0) return false;
    bool any_populated = false;
    for (int row = 1; row <= table.levels; ++row) {
        if (table.row_total(row) == 0) continue;
        any_populated = true;
        double dist = 0.0;
        for (int col = 1; col <= table.levels; ++col) {
            const std::size_t i = static_cast<std::size_t>(row - 1) * table.levels + (col - 1);
            dist += std::abs(table.probs[i] - table.last_probs[i]);
        }
        if (dist > theta) return false;
    }
    return any_populated;
}

std::optional<double> expected_future_load(const CondProbTable& table, const QuantizerState& q,
                                           int l1) {
    if (l1 < 1 || l1 > table.levels)
        throw std::invalid_argument("expected_future_load: level out of range");
    if (table.row_total(l1) == 0) return std::nullopt;

    double expected = 0.0;
    for (int l2 = 1; l2 <= table.levels; ++l2) {
        const double rep = (l2 == table.levels)
                               ? q.v_max
                               : q.v_min + (static_cast<double>(l2) - 0.5) * q.mu;
        expected += table.prob_at(l1, l2) * rep;
    }
    return expected;
}

TauEstimate compute_tau(double expected_bits, double line_rate_bps, double p_tau) {
    if (expected_bits < 0.0) throw std::invalid_argument("compute_tau: bits must be >= 0");
    if (!(line_rate_bps > 0.0)) throw std::invalid_argument("compute_tau: line rate must be > 0");
    if (p_tau < 0.0) throw std::invalid_argument("compute_tau: p_tau must be >= 0");
    TauEstimate t;
    t.tau_s = expected_bits / line_rate_bps;
    t.delta_tau_s = p_tau * t.tau_s;
    return t;
}

void write_prob_table_csv(const CondProbTable& table, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output file: " + path);
    out.precision(10);
    for (int row = 1; row <= table.levels; ++row) {
        for (int col = 1; col <= table.levels; ++col) {
            if (col > 1) out << ',';
            out << table.prob_at(row, col);
        }
        out << '\n';
    }
}

} // namespace eeesim
