#include "eeesim/commands.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "eeesim/report.hpp"
#include "eeesim/selfsim.hpp"
#include "eeesim/trace_io.hpp"

namespace eeesim {

namespace {

namespace fs = std::filesystem;

void ensure_dir(const std::string& dir) {
    if (!dir.empty()) fs::create_directories(dir);
}

std::string join(const std::string& dir, const std::string& name) {
    return dir.empty() ? name : (fs::path(dir) / name).string();
}

TrafficTrace trace_from_config(const Config& cfg, const std::string& label) {
    TrafficTrace t = synthesize_trace(cfg.pareto_config(), cfg.synth_duration_s(),
                                      cfg.synth_tick_s(), cfg.get_double("link.f_bps"));
    t.label = label;
    return t;
}

TrafficTrace acquire_trace(const Config& cfg, const std::string& trace_path) {
    if (!trace_path.empty()) return ingest_trace_file(trace_path);
    return trace_from_config(cfg, "synth");
}

SimResult run_policy(const std::string& policy, const TrafficTrace& trace, const LinkParams& lp,
                     const StrategyConfig& sc) {
    if (policy == "on") return run_always_on(trace, lp);
    if (policy == "eee") return run_eee_burst(trace, lp, sc);
    if (policy == "eeep") return run_eeep(trace, lp, sc);
    throw std::invalid_argument("unknown policy: " + policy);
}

// Offline replay of the per-window learning update, for the table heatmap.
std::pair<CondProbTable, QuantizerState> learn_table_offline(const TrafficTrace& trace,
                                                             const StrategyConfig& sc) {
    const Ns TB = sc.t_burst;
    const std::int64_t units_per_window = sc.window_T / TB;
    const std::int64_t units_t1 = sc.t_prime / TB;
    const std::int64_t k_win = trace.duration / sc.window_T;

    std::vector<Bits> bits(static_cast<std::size_t>(trace.duration / TB), 0);
    for (const auto& e : trace.events) {
        const auto idx = static_cast<std::size_t>(e.arrival_time / TB);
        if (idx < bits.size()) bits[idx] += e.size;
    }
    CondProbTable table(sc.prediction.levels);
    QuantizerState q;
    q.levels = sc.prediction.levels;
    for (std::int64_t w = 0; w < k_win; ++w) {
        const std::int64_t u0 = w * units_per_window;
        Bits v1 = 0, v2 = 0;
        for (std::int64_t i = 0; i < units_t1; ++i) v1 += bits[static_cast<std::size_t>(u0 + i)];
        for (std::int64_t i = units_t1; i < units_per_window; ++i)
            v2 += bits[static_cast<std::size_t>(u0 + i)];
        observe_window(table, q, {static_cast<double>(v1), static_cast<double>(v2)});
    }
    return {std::move(table), q};
}

nlohmann::json theory_vs_sim_block(const std::string& policy, const TrafficTrace& trace,
                                   const LinkParams& lp, const StrategyConfig& sc,
                                   const SimResult& sim) {
    nlohmann::json j;
    j["policy"] = policy;
    j["p_sim"] = sim.quiet_fraction_p;
    j["e_sim_j"] = sim.energy_j;
    try {
        TheoryInputs in = derive_theory_inputs(trace, lp, sc, &sim);
        double p_theory = 0.0;
        if (policy == "eee") {
            p_theory = p_eee_theory(in);
        } else if (policy == "eeep") {
            p_theory = mix_u(p_eee_theory(in), p_eeep_theory(in), 0.0, 0.0, in.u).first;
        }
        j["p_theory"] = p_theory;
        j["p_delta"] = sim.quiet_fraction_p - p_theory;
        j["e_theory_j"] = energy_from_quiet_fraction(p_theory, in);
        j["e_from_p_sim_j"] = energy_from_quiet_fraction(sim.quiet_fraction_p, in);
        j["e_delta_j"] = sim.energy_j - j["e_theory_j"].get<double>();
    } catch (const std::exception& e) {
        j["theory_error"] = e.what();
    }
    return j;
}

std::vector<std::string> expand_range(const std::string& body) {
    // start:stop:step, inclusive of stop up to rounding slack
    const auto c1 = body.find(':');
    const auto c2 = body.find(':', c1 + 1);
    const double start = std::stod(body.substr(0, c1));
    const double stop = std::stod(body.substr(c1 + 1, c2 - c1 - 1));
    const double step = std::stod(body.substr(c2 + 1));
    if (step <= 0.0) throw std::invalid_argument("axis range step must be > 0");
    std::vector<std::string> out;
    char buf[64];
    for (double v = start; v <= stop + step * 1e-9; v += step) {
        std::snprintf(buf, sizeof(buf), "%.12g", v);
        out.emplace_back(buf);
    }
    return out;
}

} // namespace

SweepAxis parse_axis(const std::string& spec) {
    const auto eq = spec.find('=');
    if (eq == std::string::npos)
        throw std::invalid_argument("axis must be key=v1,v2,... or key=start:stop:step");
    SweepAxis axis;
    axis.key = spec.substr(0, eq);
    const std::string body = spec.substr(eq + 1);
    if (body.find(':') != std::string::npos) {
        axis.values = expand_range(body);
    } else {
        std::istringstream ss(body);
        std::string tok;
        while (std::getline(ss, tok, ',')) axis.values.push_back(tok);
    }
    if (axis.values.empty()) throw std::invalid_argument("axis has no values: " + spec);
    return axis;
}

int cmd_synth(Config cfg, const std::string& preset, const std::string& out_dir,
              const std::string& name) {
    std::string label = name;
    if (!preset.empty()) {
        apply_synth_preset(cfg, preset);
        if (label.empty()) label = preset;
    }
    if (label.empty()) label = "synth";

    TrafficTrace trace = trace_from_config(cfg, label);
    ensure_dir(out_dir);
    const std::string path = join(out_dir, label + ".csv");
    export_trace_file(trace, path);

    const double load =
        trace.duration > 0
            ? static_cast<double>(trace.total_bits()) / (trace.duration_s() * trace.line_rate_bps)
            : 0.0;
    std::cout << "trace " << label << ": " << trace.events.size() << " packets, "
              << trace.total_bits() << " bits, d_bar=" << trace.mean_packet_bits()
              << " bits/packet, duration=" << trace.duration_s() << " s, load=" << load * 100.0
              << "% of line rate\n"
              << "written " << path << "\n";
    return kExitOk;
}

int cmd_analyze(const std::string& trace_path, double tick_s, const std::string& out_dir) {
    const TrafficTrace trace = ingest_trace_file(trace_path);
    const LoadSeries series = bin_trace(trace, tick_s);
    const HurstEstimate est = estimate_hurst(series);

    ensure_dir(out_dir);
    write_variance_time_csv(est.points, join(out_dir, "variance_time.csv"));
    std::printf("H_hat=%.4f (clamped %.4f)  beta_hat=%.4f  r_squared=%.4f  points=%zu\n",
                est.h_hat, est.h_clamped, est.beta_hat, est.r_squared, est.points.size());
    return kExitOk;
}

int cmd_simulate(const Config& cfg, const std::string& trace_path, const std::string& policy,
                 const std::string& out_dir) {
    const LinkParams lp = cfg.link_params();
    const StrategyConfig sc = cfg.strategy_config();
    const TrafficTrace trace = acquire_trace(cfg, trace_path);

    std::vector<std::string> policies;
    if (policy == "all")
        policies = {"on", "eee", "eeep"};
    else
        policies = {policy};

    ensure_dir(out_dir);
    bool overload = false;
    for (const auto& pol : policies) {
        const SimResult result = run_policy(pol, trace, lp, sc);
        overload = overload || result.overload();

        nlohmann::json doc = sim_result_to_json(result, cfg.entries());
        doc["policy"] = pol;
        doc["trace_label"] = trace.label;
        doc["theory_vs_sim"] = theory_vs_sim_block(pol, trace, lp, sc, result);
        write_json_file(doc, join(out_dir, "result_" + pol + ".json"));
        if (pol != "on") write_windows_csv(result, join(out_dir, "windows_" + pol + ".csv"));
        if (pol == "eeep") {
            const auto learned = learn_table_offline(trace, sc);
            write_prob_table_csv(learned.first, join(out_dir, "ptable.csv"));
        }
        std::printf("%-4s p=%.4f energy=%.3f J U=%.3f mean_tau=%.4g s delayed=%.3f overload=%s\n",
                    pol.c_str(), result.quiet_fraction_p, result.energy_j, result.u_fraction,
                    result.mean_tau_s, result.delayed_window_fraction,
                    result.overload() ? "yes" : "no");
    }
    return overload ? kExitOverload : kExitOk;
}

namespace {

std::string sim_sweep_row(const Config& base, const std::string& trace_path,
                          const std::string& policy,
                          const std::vector<std::pair<std::string, std::string>>& assignment) {
    std::ostringstream row;
    for (const auto& kv : assignment) row << kv.second << ',';
    try {
        Config cfg = base;
        for (const auto& kv : assignment) cfg.set(kv.first, kv.second);
        const TrafficTrace trace = acquire_trace(cfg, trace_path);
        const SimResult r = run_policy(policy, trace, cfg.link_params(), cfg.strategy_config());
        row << policy << ',' << r.quiet_fraction_p << ',' << r.energy_j << ',' << r.u_fraction
            << ',' << r.mean_tau_s << ',' << r.delayed_window_fraction << ','
            << (1.0 - r.delayed_window_fraction) << ',' << r.max_packet_delay_s << ','
            << r.overload_units << ',';
    } catch (const std::exception& e) {
        row << policy << ",,,,,,,,," << '"' << e.what() << '"';
        return row.str();
    }
    return row.str();
}

std::string theory_sweep_row(const Config& base,
                             const std::vector<std::pair<std::string, std::string>>& assignment) {
    std::ostringstream row;
    for (const auto& kv : assignment) row << kv.second << ',';
    try {
        Config cfg = base;
        for (const auto& kv : assignment) cfg.set(kv.first, kv.second);
        const BoundsReport r = bounds_report(cfg.theory_inputs());
        row << r.p_eee << ',' << r.p_eeep << ',' << r.p_u << ',' << r.eta_on << ',' << r.eta_eee
            << ',' << r.eta_eeep << ',' << r.eta_u << ',' << r.e_eee_j << ',' << r.e_u_j << ','
            << r.tg << ',' << r.eg << ',';
    } catch (const std::exception& e) {
        row << ",,,,,,,,,," << '"' << e.what() << '"';
        return row.str();
    }
    return row.str();
}

} // namespace

int cmd_sweep(const Config& cfg, const std::string& trace_path, const std::string& mode,
              const std::string& policy, const std::vector<std::string>& axis_specs,
              const std::string& out_dir, int jobs) {
    if (axis_specs.empty()) throw std::invalid_argument("sweep needs at least one --axis");
    if (mode != "sim" && mode != "theory")
        throw std::invalid_argument("sweep mode must be sim or theory");

    std::vector<SweepAxis> axes;
    for (const auto& spec : axis_specs) {
        SweepAxis axis = parse_axis(spec);
        cfg.get_string(axis.key); // validates the key exists
        axes.push_back(std::move(axis));
    }

    std::size_t total = 1;
    for (const auto& a : axes) total *= a.values.size();

    // grid order: last axis varies fastest
    std::vector<std::vector<std::pair<std::string, std::string>>> points(total);
    for (std::size_t i = 0; i < total; ++i) {
        std::size_t rem = i;
        std::vector<std::pair<std::string, std::string>> assignment(axes.size());
        for (std::size_t ax = axes.size(); ax-- > 0;) {
            const auto& a = axes[ax];
            assignment[ax] = {a.key, a.values[rem % a.values.size()]};
            rem /= a.values.size();
        }
        points[i] = std::move(assignment);
    }

    std::vector<std::string> rows(total);
    std::atomic<std::size_t> next{0};
    const int workers = std::max(1, std::min<int>(jobs, static_cast<int>(total)));
    auto work = [&] {
        for (std::size_t i = next.fetch_add(1); i < total; i = next.fetch_add(1)) {
            rows[i] = (mode == "sim") ? sim_sweep_row(cfg, trace_path, policy, points[i])
                                      : theory_sweep_row(cfg, points[i]);
        }
    };
    if (workers == 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(workers));
        for (int i = 0; i < workers; ++i) pool.emplace_back(work);
        for (auto& t : pool) t.join();
    }

    ensure_dir(out_dir);
    const std::string path = join(out_dir, "sweep.csv");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output file: " + path);
    for (const auto& a : axes) out << a.key << ',';
    if (mode == "sim")
        out << "policy,quiet_fraction,energy_j,u,mean_tau_s,delayed_window_fraction,"
               "non_delayed_window_fraction,max_packet_delay_s,overload_units,error\n";
    else
        out << "p_eee,p_eeep,p_u,eta_on,eta_eee,eta_eeep,eta_u,e_eee_j,e_u_j,tg,eg,error\n";
    bool any_error = false;
    for (const auto& r : rows) {
        out << r << '\n';
        if (r.find('"') != std::string::npos) any_error = true;
    }
    std::cout << "wrote " << total << " rows to " << path << "\n";
    return any_error ? kExitError : kExitOk;
}

} // namespace eeesim
