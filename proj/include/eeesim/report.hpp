#ifndef EEESIM_REPORT_HPP
#define EEESIM_REPORT_HPP

#include <map>
#include <string>

#include <json.hpp>

#include "eeesim/link_sim.hpp"
#include "eeesim/theory.hpp"

namespace eeesim {

// The params echo block makes every report self-describing.
nlohmann::json sim_result_to_json(const SimResult& result,
                                  const std::map<std::string, std::string>& params_echo);

nlohmann::json bounds_report_to_json(const BoundsReport& report, const TheoryInputs& inputs,
                                     const std::map<std::string, std::string>& params_echo);

void write_json_file(const nlohmann::json& doc, const std::string& path);

// index,strategy,tau_s,delta_tau_s,carried_bits,H_hat
void write_windows_csv(const SimResult& result, const std::string& path);

} // namespace eeesim

#endif
