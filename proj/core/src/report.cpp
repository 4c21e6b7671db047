#include "mcim/report.hpp"

namespace mcim {

nlohmann::ordered_json report_to_json(const SolverReport& report,
                                      const DirectedGraph& g) {
  nlohmann::ordered_json j;
  j["algorithm"] = report.algorithm;
  auto& seeds = j["seeds"] = nlohmann::ordered_json::array();
  for (NodeId v : report.seeds) seeds.push_back(g.label(v));
  j["l"] = report.l;
  j["f_lo"] = report.f_lo;
  if (report.gamma_lower)
    j["gamma_lower"] = *report.gamma_lower;
  else
    j["gamma_lower"] = nullptr;
  j["influence"] = {{"mean", report.influence.mean},
                    {"stderr", report.influence.std_error},
                    {"trials", report.influence.trials}};
  j["not_active_mean"] = report.influence.not_active_mean;
  j["phase_times"] = {{"opt_lower_s", report.phases.opt_lower_s},
                      {"sampling_s", report.phases.sampling_s},
                      {"selection_s", report.phases.selection_s},
                      {"evaluation_s", report.phases.evaluation_s},
                      {"total_s", report.phases.total_s}};
  j["graph_summary"] = report.graph_summary;
  j["config"] = report.config_echo.is_null() ? nlohmann::ordered_json()
                                             : report.config_echo;
  j["rng_algorithm"] = report.rng_algorithm;
  return j;
}

}  // namespace mcim
