#include "eeesim/theory.hpp"

#include <cmath>
#include <stdexcept>
#include <tuple>

namespace eeesim {

void TheoryInputs::validate() const {
    if (n_bar < 0.0) throw std::invalid_argument("theory: n_bar must be >= 0");
    if (!(t_pack_bar > 0.0)) throw std::invalid_argument("theory: t_pack_bar must be > 0");
    if (!(t_burst > 0.0)) throw std::invalid_argument("theory: t_burst must be > 0");
    if (!(t_prime > 0.0) || !(t_prime < window_T))
        throw std::invalid_argument("theory: need 0 < t_prime < window_T");
    if (t_trans < 0.0) throw std::invalid_argument("theory: t_trans must be >= 0");
    if (tau_bar < 0.0 || p_tau < 0.0) throw std::invalid_argument("theory: tau/p_tau must be >= 0");
    if (u < 0.0 || u > 1.0) throw std::invalid_argument("theory: u must be in [0,1]");
    if (!(pw_on > pw_off) || pw_off < 0.0)
        throw std::invalid_argument("theory: need pw_on > pw_off >= 0");
    if (!(duration_L > 0.0)) throw std::invalid_argument("theory: duration must be > 0");
}

double p_eee_theory(const TheoryInputs& in) {
    in.validate();
    const double service = in.n_bar * in.t_pack_bar;
    if (!(in.t_burst > in.t_trans + service))
        throw std::domain_error("p_eee_theory: burst unit overloaded (T_B <= T_trans + N*T_pack)");
    return (in.t_burst - in.t_trans - service) / in.t_burst;
}

double p_eeep_theory(const TheoryInputs& in) {
    in.validate();
    const double service = in.n_bar * in.t_pack_bar;
    if (!(in.t_burst > in.t_trans + service))
        throw std::domain_error("p_eeep_theory: burst unit overloaded");
    const double tail = in.tau_bar + in.delta_tau_bar();
    if (tail > in.window_T - in.t_prime)
        throw std::domain_error("p_eeep_theory: tail exceeds the trailing interval");
    const double units_t1 = in.t_prime / in.t_burst;
    const double quiet_t1 = (in.t_burst - service) * units_t1 - in.t_trans * (units_t1 + 1.0);
    const double quiet_t2 = (in.window_T - in.t_prime) - tail;
    return (quiet_t1 + quiet_t2) / in.window_T;
}

Efficiencies efficiencies(const TheoryInputs& in) {
    in.validate();
    Efficiencies eta;
    eta.eta_on = in.n_bar * in.t_pack_bar / in.t_burst;
    if (in.n_bar > 0.0) {
        const double r = in.t_trans / in.t_pack_bar;
        eta.eta_eee = in.n_bar / (in.n_bar + r);
        eta.eta_eeep = in.n_bar / (in.n_bar + r * in.kappa());
    }
    return eta;
}

std::pair<std::int64_t, std::int64_t> load_limits(const TheoryInputs& in) {
    in.validate();
    const double rb = in.t_burst / in.t_pack_bar;
    const double rt = in.t_trans / in.t_pack_bar;
    return {static_cast<std::int64_t>(std::floor(rb - rt)),
            static_cast<std::int64_t>(std::floor(rb - rt * in.kappa()))};
}

std::pair<std::int64_t, std::int64_t> optimal_loads(const TheoryInputs& in) {
    in.validate();
    if (!(in.t_burst > in.t_trans))
        throw std::domain_error("optimal_loads: need T_B > T_trans");
    const double rb = in.t_burst / in.t_pack_bar;
    const double rt = in.t_trans / in.t_pack_bar;
    const double rtk = rt * in.kappa();
    return {static_cast<std::int64_t>(std::floor(std::sqrt(rt) * (std::sqrt(rb) - std::sqrt(rt)))),
            static_cast<std::int64_t>(
                std::floor(std::sqrt(rtk) * (std::sqrt(rb) - std::sqrt(rtk))))};
}

std::pair<double, double> efficiency_bounds(const TheoryInputs& in) {
    const double ratio = in.t_trans / in.t_burst;
    return {1.0 - ratio, 1.0 - ratio * in.kappa()};
}

std::pair<double, double> mix_u(double p_eee, double p_eeep, double eta_eee, double eta_eeep,
                                double u) {
    if (u < 0.0 || u > 1.0) throw std::invalid_argument("mix_u: u must be in [0,1]");
    return {u * p_eeep + (1.0 - u) * p_eee, u * eta_eeep + (1.0 - u) * eta_eee};
}

double energy_from_quiet_fraction(double p, const TheoryInputs& in) {
    if (p < 0.0 || p > 1.0) throw std::invalid_argument("energy: p must be in [0,1]");
    return in.duration_L * (p * in.pw_off + (1.0 - p) * in.pw_on);
}

double time_gain(double p_eee, double p_eeep, double u) {
    if (!(p_eee > 0.0)) throw std::domain_error("time_gain: p_eee must be > 0");
    return u * (p_eeep - p_eee) / p_eee;
}

std::pair<double, double> energy_gain_forms(const TheoryInputs& in) {
    const double p_eee = p_eee_theory(in);
    const double denom = in.pw_on / (in.pw_on - in.pw_off) - p_eee;
    if (denom == 0.0) throw std::domain_error("energy_gain: degenerate denominator");

    const double x = (in.t_trans / in.window_T) * ((in.window_T - in.t_prime) / in.t_burst - 1.0) +
                     (in.n_bar * in.t_pack_bar / in.window_T) * (in.window_T - in.t_prime) /
                         in.t_burst;
    const double tau_frac = in.tau_bar / in.window_T;
    const double eg_ratio_form = in.u * (x - tau_frac - tau_frac * in.p_tau) / denom;

    const double p_eeep = p_eeep_theory(in);
    const auto [p_u, eta_u] = mix_u(p_eee, p_eeep, 0.0, 0.0, in.u);
    const double e_eee = energy_from_quiet_fraction(p_eee, in);
    const double e_u = energy_from_quiet_fraction(p_u, in);
    const double eg_energy_form = (e_eee - e_u) / e_eee;

    return {eg_ratio_form, eg_energy_form};
}

double energy_gain(const TheoryInputs& in) {
    const auto [a, b] = energy_gain_forms(in);
    if (std::abs(a - b) > 1e-9)
        throw std::logic_error("energy_gain: closed-form variants disagree beyond 1e-9");
    return a;
}

std::vector<std::pair<double, double>> eg_vs_ptau_sweep(const TheoryInputs& in,
                                                        const std::vector<double>& p_tau_values) {
    std::vector<std::pair<double, double>> out;
    out.reserve(p_tau_values.size());
    for (const double pt : p_tau_values) {
        TheoryInputs point = in;
        point.p_tau = pt;
        out.emplace_back(pt, energy_gain(point));
    }
    // EG is affine in p_tau; a non-constant second difference means a bug
    for (std::size_t i = 2; i < out.size(); ++i) {
        const double d1 = out[i - 1].second - out[i - 2].second;
        const double d2 = out[i].second - out[i - 1].second;
        const double dx1 = out[i - 1].first - out[i - 2].first;
        const double dx2 = out[i].first - out[i - 1].first;
        if (dx1 > 0.0 && dx2 > 0.0 && std::abs(d1 / dx1 - d2 / dx2) > 1e-9)
            throw std::logic_error("eg_vs_ptau_sweep: non-linear energy-gain response");
    }
    return out;
}

BoundsReport bounds_report(const TheoryInputs& in) {
    BoundsReport r;
    r.p_eee = p_eee_theory(in);
    r.p_eeep = p_eeep_theory(in);
    const Efficiencies eta = efficiencies(in);
    r.eta_on = eta.eta_on;
    r.eta_eee = eta.eta_eee;
    r.eta_eeep = eta.eta_eeep;
    std::tie(r.p_u, r.eta_u) = mix_u(r.p_eee, r.p_eeep, r.eta_eee, r.eta_eeep, in.u);
    std::tie(r.n_limit_eee, r.n_limit_eeep) = load_limits(in);
    std::tie(r.n_star_eee, r.n_star_eeep) = optimal_loads(in);
    std::tie(r.eta_bound_eee, r.eta_bound_eeep) = efficiency_bounds(in);
    r.e_eee_j = energy_from_quiet_fraction(r.p_eee, in);
    r.e_u_j = energy_from_quiet_fraction(r.p_u, in);
    r.tg = time_gain(r.p_eee, r.p_eeep, in.u);
    r.eg = energy_gain(in);
    return r;
}

} // namespace eeesim
