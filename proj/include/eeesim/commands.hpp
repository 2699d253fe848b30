#ifndef EEESIM_COMMANDS_HPP
#define EEESIM_COMMANDS_HPP

#include <string>
#include <vector>

#include "eeesim/config.hpp"

namespace eeesim {

// Exit codes: 0 ok, 1 error, 3 finished with overloaded burst units.
inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitOverload = 3;

struct SweepAxis {
    std::string key;
    std::vector<std::string> values;
};

// "key=v1,v2,v3" or "key=start:stop:step" (inclusive range)
SweepAxis parse_axis(const std::string& spec);

int cmd_synth(Config cfg, const std::string& preset, const std::string& out_dir,
              const std::string& name);

int cmd_analyze(const std::string& trace_path, double tick_s, const std::string& out_dir);

// trace_path empty -> synthesize from the config. policy: on|eee|eeep|all.
int cmd_simulate(const Config& cfg, const std::string& trace_path, const std::string& policy,
                 const std::string& out_dir);

// mode: sim|theory. Cross-product over the axes, one CSV row per point,
// per-point failures recorded in-row.
int cmd_sweep(const Config& cfg, const std::string& trace_path, const std::string& mode,
              const std::string& policy, const std::vector<std::string>& axis_specs,
              const std::string& out_dir, int jobs);

} // namespace eeesim

#endif
