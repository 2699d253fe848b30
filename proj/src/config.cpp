#include "eeesim/config.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <random>
#include <stdexcept>

namespace eeesim {

Config::Config() {
    values_ = {
        {"seed", "1"},
        // physical link, 1000BASE-T
        {"link.f_bps", "1000000000"},
        {"link.t_s_ms", "0.202"},
        {"link.t_w_ms", "0.0165"},
        {"link.t_r_ms", "0.2"},
        {"link.refresh_period_ms", "20"},
        {"link.pw_on_w", "0.697"},
        {"link.pw_off_w", "0.053"},
        // scheduling strategy
        {"strategy.t_ms", "100"},
        {"strategy.t_prime_ms", "50"},
        {"strategy.t_b_ms", "1"},
        {"strategy.model_faithful_eee", "true"},
        {"strategy.refresh_enabled", "false"},
        // prediction
        {"predict.levels", "10"},
        {"predict.theta", "0.05"},
        {"predict.h_bar", "0.6"},
        {"predict.p_tau", "0"},
        {"predict.hurst_recheck_windows", "50"},
        // synthetic traffic
        {"synth.sources", "10"},
        {"synth.alpha", "1.0"},
        {"synth.b_ticks", "1"},
        {"synth.packet_size_bits", "8000"},
        {"synth.tick_ms", "1"},
        {"synth.duration_s", "200"},
        // closed-form evaluation
        {"theory.n_bar", "10"},
        {"theory.d_bar_bits", "8000"},
        {"theory.u", "1"},
        {"theory.tau_bar_ms", "-1"}, // -1: nominal tail that exactly serves T2
        {"theory.p_tau", "0"},
        {"theory.duration_s", "200"},
    };
}

void Config::load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const auto first = line.find_first_not_of(" \t");
        if (first == std::string::npos || line[first] == '#') continue;
        try {
            set_kv(line.substr(first));
        } catch (const std::exception& e) {
            throw std::runtime_error(path + ":" + std::to_string(line_no) + ": " + e.what());
        }
    }
}

void Config::set(const std::string& key, const std::string& value) {
    const auto it = values_.find(key);
    if (it == values_.end()) throw std::invalid_argument("unknown config key: " + key);
    it->second = value;
}

void Config::set_kv(const std::string& key_eq_value) {
    const auto eq = key_eq_value.find('=');
    if (eq == std::string::npos)
        throw std::invalid_argument("expected key=value, got: " + key_eq_value);
    std::string key = key_eq_value.substr(0, eq);
    std::string value = key_eq_value.substr(eq + 1);
    const auto trim = [](std::string& s) {
        const auto b = s.find_first_not_of(" \t");
        const auto e = s.find_last_not_of(" \t");
        s = (b == std::string::npos) ? std::string() : s.substr(b, e - b + 1);
    };
    trim(key);
    trim(value);
    set(key, value);
}

double Config::get_double(const std::string& key) const {
    const std::string s = get_string(key);
    try {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument("");
        return v;
    } catch (const std::exception&) {
        throw std::invalid_argument("config key " + key + ": not a number: '" + s + "'");
    }
}

std::int64_t Config::get_int(const std::string& key) const {
    const std::string s = get_string(key);
    try {
        std::size_t pos = 0;
        const std::int64_t v = std::stoll(s, &pos);
        if (pos != s.size()) throw std::invalid_argument("");
        return v;
    } catch (const std::exception&) {
        throw std::invalid_argument("config key " + key + ": not an integer: '" + s + "'");
    }
}

bool Config::get_bool(const std::string& key) const {
    std::string s = get_string(key);
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
    if (s == "true" || s == "1" || s == "yes" || s == "on") return true;
    if (s == "false" || s == "0" || s == "no" || s == "off") return false;
    throw std::invalid_argument("config key " + key + ": not a boolean: '" + s + "'");
}

std::string Config::get_string(const std::string& key) const {
    const auto it = values_.find(key);
    if (it == values_.end()) throw std::invalid_argument("unknown config key: " + key);
    return it->second;
}

LinkParams Config::link_params() const {
    LinkParams p;
    p.line_rate_bps = get_double("link.f_bps");
    p.t_s = ms_to_ns(get_double("link.t_s_ms"));
    p.t_w = ms_to_ns(get_double("link.t_w_ms"));
    p.t_r = ms_to_ns(get_double("link.t_r_ms"));
    p.refresh_period = ms_to_ns(get_double("link.refresh_period_ms"));
    p.pw_on_w = get_double("link.pw_on_w");
    p.pw_off_w = get_double("link.pw_off_w");
    p.validate();
    return p;
}

StrategyConfig Config::strategy_config() const {
    StrategyConfig c;
    c.window_T = ms_to_ns(get_double("strategy.t_ms"));
    c.t_prime = ms_to_ns(get_double("strategy.t_prime_ms"));
    c.t_burst = ms_to_ns(get_double("strategy.t_b_ms"));
    c.model_faithful_eee = get_bool("strategy.model_faithful_eee");
    c.refresh_enabled = get_bool("strategy.refresh_enabled");
    c.prediction.levels = static_cast<int>(get_int("predict.levels"));
    c.prediction.theta = get_double("predict.theta");
    c.prediction.h_bar = get_double("predict.h_bar");
    c.prediction.p_tau = get_double("predict.p_tau");
    c.prediction.hurst_recheck_windows = static_cast<int>(get_int("predict.hurst_recheck_windows"));
    c.validate();
    return c;
}

ParetoSourceConfig Config::pareto_config() const {
    ParetoSourceConfig c;
    c.source_count = static_cast<int>(get_int("synth.sources"));
    c.alpha = get_double("synth.alpha");
    c.location_b = get_double("synth.b_ticks");
    c.packet_size = get_int("synth.packet_size_bits");
    c.seed = static_cast<std::uint64_t>(get_int("seed"));
    return c;
}

TheoryInputs Config::theory_inputs() const {
    TheoryInputs in;
    in.n_bar = get_double("theory.n_bar");
    in.t_pack_bar = get_double("theory.d_bar_bits") / get_double("link.f_bps");
    in.window_T = get_double("strategy.t_ms") * 1e-3;
    in.t_prime = get_double("strategy.t_prime_ms") * 1e-3;
    in.t_burst = get_double("strategy.t_b_ms") * 1e-3;
    in.t_trans = (get_double("link.t_s_ms") + get_double("link.t_w_ms")) * 1e-3;
    const double tau_ms = get_double("theory.tau_bar_ms");
    in.tau_bar = tau_ms < 0.0 ? in.tau_bar_nominal() : tau_ms * 1e-3;
    in.p_tau = get_double("theory.p_tau");
    in.u = get_double("theory.u");
    in.pw_on = get_double("link.pw_on_w");
    in.pw_off = get_double("link.pw_off_w");
    in.duration_L = get_double("theory.duration_s");
    return in;
}

double Config::synth_duration_s() const { return get_double("synth.duration_s"); }

double Config::synth_tick_s() const { return get_double("synth.tick_ms") * 1e-3; }

std::uint64_t Config::seed() const { return static_cast<std::uint64_t>(get_int("seed")); }

void apply_synth_preset(Config& cfg, const std::string& preset) {
    if (preset == "a-high") {
        cfg.set("synth.sources", "10");
        cfg.set("synth.alpha", "1.0");
    } else if (preset == "a-low") {
        cfg.set("synth.sources", "10");
        cfg.set("synth.alpha", "1.8");
    } else if (preset == "b-random") {
        // M ~ U(30,70), alpha ~ U(1.2,1.6), both drawn from the seed
        std::seed_seq sseq{cfg.seed(), std::uint64_t{0xb5ee9}};
        std::mt19937_64 eng(sseq);
        const auto u53 = [&] { return static_cast<double>((eng() >> 11) + 1) * 0x1.0p-53; };
        const int m = 30 + static_cast<int>(u53() * 40.999999);
        const double alpha = 1.2 + 0.4 * u53();
        cfg.set("synth.sources", std::to_string(m));
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%.6f", alpha);
        cfg.set("synth.alpha", buf);
    } else {
        throw std::invalid_argument("unknown preset: " + preset +
                                    " (expected a-high, a-low or b-random)");
    }
}

} // namespace eeesim
