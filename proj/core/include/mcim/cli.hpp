#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mcim/runconfig.hpp"

namespace mcim::cli {

// Runs the configured algorithm and writes the JSON report to out_path
// ("-" for stdout). dump_tuples, when set, regenerates the selection-phase
// tuple collection and writes its text dump there.
int cmd_solve(const std::string& config_path, const std::string& out_path,
              const std::string& dump_tuples_path = {});

// Monte-Carlo evaluation of an explicit seed set under the full config.
int cmd_evaluate(const std::string& config_path, const std::string& seeds_path,
                 std::optional<std::uint64_t> trials, const std::string& out_path);

// One solver run per (algorithm, k); appends schema-stable CSV rows.
int cmd_sweep(const std::string& config_path, const std::vector<unsigned>& k_list,
              const std::string& out_csv,
              const std::vector<std::string>& algorithms = {});

// Validates the sampler against the exact oracle on an enumerable instance:
// unbiasedness, bound ordering, and the tightness/degeneration identities.
// Prints one pass/fail line per suite; nonzero exit on any failure.
int cmd_oracle_check(const std::string& config_path, std::uint64_t tuples = 100000);

}  // namespace mcim::cli
