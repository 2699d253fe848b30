#include "eeesim/report.hpp"

#include <fstream>

namespace eeesim {

nlohmann::json sim_result_to_json(const SimResult& result,
                                  const std::map<std::string, std::string>& params_echo) {
    nlohmann::json j;
    j["quiet_fraction_p"] = result.quiet_fraction_p;
    j["energy_j"] = result.energy_j;
    j["total_bits_arrived"] = result.total_bits_arrived;
    j["bits_transmitted"] = result.bits_transmitted;
    j["bits_queued_end"] = result.bits_queued_end;
    j["packets_arrived"] = result.packets_arrived;
    j["packets_transmitted"] = result.packets_transmitted;
    j["u_fraction"] = result.u_fraction;
    j["delayed_window_fraction"] = result.delayed_window_fraction;
    j["max_packet_delay_s"] = result.max_packet_delay_s;
    j["mean_tau_s"] = result.mean_tau_s;
    j["overload_units"] = result.overload_units;
    j["overload"] = result.overload();
    j["duration_s"] = result.duration_s;
    j["window_count"] = result.windows.size();

    nlohmann::json res;
    for (std::size_t i = 0; i < kLinkStateCount; ++i)
        res[link_state_name(static_cast<LinkState>(i))] = ns_to_s(result.residency_ns[i]);
    j["residency_s"] = res;
    j["params"] = params_echo;
    return j;
}

nlohmann::json bounds_report_to_json(const BoundsReport& r, const TheoryInputs& in,
                                     const std::map<std::string, std::string>& params_echo) {
    nlohmann::json j;
    j["p_eee"] = r.p_eee;
    j["p_eeep"] = r.p_eeep;
    j["p_u"] = r.p_u;
    j["eta_on"] = r.eta_on;
    j["eta_eee"] = r.eta_eee;
    j["eta_eeep"] = r.eta_eeep;
    j["eta_u"] = r.eta_u;
    j["n_limit_eee"] = r.n_limit_eee;
    j["n_limit_eeep"] = r.n_limit_eeep;
    j["n_star_eee"] = r.n_star_eee;
    j["n_star_eeep"] = r.n_star_eeep;
    j["eta_bound_eee"] = r.eta_bound_eee;
    j["eta_bound_eeep"] = r.eta_bound_eeep;
    j["e_eee_j"] = r.e_eee_j;
    j["e_u_j"] = r.e_u_j;
    j["tg"] = r.tg;
    j["eg"] = r.eg;

    nlohmann::json ji;
    ji["n_bar"] = in.n_bar;
    ji["t_pack_bar_s"] = in.t_pack_bar;
    ji["window_T_s"] = in.window_T;
    ji["t_prime_s"] = in.t_prime;
    ji["t_burst_s"] = in.t_burst;
    ji["t_trans_s"] = in.t_trans;
    ji["tau_bar_s"] = in.tau_bar;
    ji["p_tau"] = in.p_tau;
    ji["u"] = in.u;
    ji["kappa"] = in.kappa();
    j["inputs"] = ji;
    j["params"] = params_echo;
    return j;
}

void write_json_file(const nlohmann::json& doc, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output file: " + path);
    out << doc.dump(2) << '\n';
}

void write_windows_csv(const SimResult& result, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output file: " + path);
    out << "index,strategy,tau_s,delta_tau_s,carried_bits,H_hat\n";
    for (const auto& w : result.windows) {
        out << w.index << ',' << (w.strategy_used == Strategy::EEEP ? "EEEP" : "EEE") << ','
            << w.tau_s << ',' << w.delta_tau_s << ',' << w.carried_over_bits << ','
            << w.h_hat_at_decision << '\n';
    }
}

} // namespace eeesim
