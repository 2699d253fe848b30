#ifndef EEESIM_THEORY_HPP
#define EEESIM_THEORY_HPP

#include <cstdint>
#include <utility>
#include <vector>

namespace eeesim {

// Closed-form inputs. N̄ is real-valued; flooring only happens where the
// formulas themselves floor (load limits, optimal loads).
struct TheoryInputs {
    double n_bar = 0.0;        // mean packets per burst unit
    double t_pack_bar = 0.0;   // mean per-packet serialization time [s]
    double window_T = 100e-3;  // scheduling window [s]
    double t_prime = 50e-3;    // leading-interval length [s]
    double t_burst = 1e-3;     // burst unit T_B [s]
    double t_trans = 0.2185e-3;// sleep+wake transition cost [s]
    double tau_bar = 0.0;      // mean predicted tail transmission time [s]
    double p_tau = 0.0;        // tail extension fraction (delta_tau = p_tau * tau)
    double u = 0.0;            // fraction of windows using the predictive tail
    double pw_on = 0.697;      // [W]
    double pw_off = 0.053;     // [W]
    double duration_L = 200.0; // [s]

    double kappa() const { return (t_prime + t_burst) / window_T; }
    double delta_tau_bar() const { return p_tau * tau_bar; }
    // tail time that exactly serves the trailing-interval traffic
    double tau_bar_nominal() const { return n_bar * t_pack_bar * (window_T - t_prime) / t_burst; }
    void validate() const;
};

struct Efficiencies {
    double eta_on = 0.0;
    double eta_eee = 0.0;
    double eta_eeep = 0.0;
};

struct BoundsReport {
    double p_eee = 0.0;
    double p_eeep = 0.0;
    double p_u = 0.0;
    double eta_on = 0.0;
    double eta_eee = 0.0;
    double eta_eeep = 0.0;
    double eta_u = 0.0;
    std::int64_t n_limit_eee = 0;
    std::int64_t n_limit_eeep = 0;
    std::int64_t n_star_eee = 0;
    std::int64_t n_star_eeep = 0;
    double eta_bound_eee = 0.0;
    double eta_bound_eeep = 0.0;
    double e_eee_j = 0.0;
    double e_u_j = 0.0;
    double tg = 0.0;
    double eg = 0.0;
};

// Quiet-time fraction of EEE burst transmission. Throws on overload
// (per-unit service plus transitions exceeding the burst unit).
double p_eee_theory(const TheoryInputs& in);

// Quiet-time fraction of the predictive strategy, general (tau_bar,
// delta_tau_bar) form.
double p_eeep_theory(const TheoryInputs& in);

Efficiencies efficiencies(const TheoryInputs& in);

// Loads at which Always-On matches EEE / EEEP efficiency (floored).
std::pair<std::int64_t, std::int64_t> load_limits(const TheoryInputs& in);

// Loads maximizing the efficiency advantage over Always-On (floored).
std::pair<std::int64_t, std::int64_t> optimal_loads(const TheoryInputs& in);

// Efficiency ceilings 1 - T_trans/T_B and 1 - (T_trans/T_B)*kappa.
std::pair<double, double> efficiency_bounds(const TheoryInputs& in);

// Convex mixing by the usage fraction U.
std::pair<double, double> mix_u(double p_eee, double p_eeep, double eta_eee, double eta_eeep,
                                double u);

double energy_from_quiet_fraction(double p, const TheoryInputs& in);

double time_gain(double p_eee, double p_eeep, double u);

// Energy gain over plain EEE. Evaluates both the power-ratio form and the
// (E_EEE - E_U)/E_EEE form and requires them to agree to 1e-9.
double energy_gain(const TheoryInputs& in);
std::pair<double, double> energy_gain_forms(const TheoryInputs& in);

std::vector<std::pair<double, double>> eg_vs_ptau_sweep(const TheoryInputs& in,
                                                        const std::vector<double>& p_tau_values);

BoundsReport bounds_report(const TheoryInputs& in);

} // namespace eeesim

#endif
