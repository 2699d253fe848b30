#ifndef EEESIM_CONFIG_HPP
#define EEESIM_CONFIG_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "eeesim/link_sim.hpp"
#include "eeesim/theory.hpp"
#include "eeesim/traffic.hpp"

namespace eeesim {

// Flat key=value store with section-prefixed keys (link.t_s_ms=0.202).
// Unknown keys are rejected so typos surface instead of silently using
// defaults.
class Config {
public:
    Config(); // populated with the default parameter set

    void load_file(const std::string& path);
    void set(const std::string& key, const std::string& value); // throws on unknown key
    void set_kv(const std::string& key_eq_value);                // "key=value" form

    double get_double(const std::string& key) const;
    std::int64_t get_int(const std::string& key) const;
    bool get_bool(const std::string& key) const;
    std::string get_string(const std::string& key) const;

    const std::map<std::string, std::string>& entries() const { return values_; }

    LinkParams link_params() const;
    StrategyConfig strategy_config() const;
    ParetoSourceConfig pareto_config() const;
    TheoryInputs theory_inputs() const;
    double synth_duration_s() const;
    double synth_tick_s() const;
    std::uint64_t seed() const;

private:
    std::map<std::string, std::string> values_;
};

// Applies a named synthesis preset onto a config. "a-high" and "a-low" are
// the fixed 10-source sets; "b-random" draws M and alpha from the seed.
void apply_synth_preset(Config& cfg, const std::string& preset);

} // namespace eeesim

#endif
