#pragma once

#include <string>

#include "heatrl/config.hpp"
#include "heatrl/harness.hpp"

namespace heatrl {

// Whole-run operations behind the CLI subcommands. Each writes its
// artifacts plus effective_config.json into out_dir and throws the module
// error taxonomy on failure. out_dir must already be resolved (flag, env
// override, or the config default).

// Materializes the configured scenario: loads the CSV when a path is set
// (scenario_override wins over the config path), otherwise synthesizes it;
// attaches generated requests when enabled.
Scenario resolve_scenario(const RunConfig& cfg, const std::string& scenario_override = "");

// Synthesizes the scenario and writes scenario.csv.
void run_generate(const RunConfig& cfg, const std::string& out_dir);

// Trains one agent per the config curriculum; writes the checkpoint
// (train.out_name), periodic checkpoints, and reward_curve.csv. A negative
// override keeps the config value. Throws TrainingError after saving when
// training diverged.
void run_train(RunConfig cfg, long episodes_override, long long seed_override,
               const std::string& out_dir);

// Projects the reference consumption of a frozen checkpoint over the
// scenario and writes bau.csv.
void run_bau(const RunConfig& cfg, const std::string& checkpoint_path,
             const std::string& scenario_override, const std::string& out_dir);

// Runs one case and emits its KPI report, trajectory, and plots.
KpiReport run_evaluate(const RunConfig& cfg, const std::string& checkpoint_path,
                       const std::string& scenario_override, const std::string& case_name,
                       const std::string& out_dir);

// Runs all four cases on the identical scenario and emits the combined
// report set plus bau.csv.
void run_compare(const RunConfig& cfg, const std::string& out_dir);

// Single episode of one case with the full step log (trajectory CSV + SVG).
KpiReport run_simulate(const RunConfig& cfg, const std::string& case_name,
                       const std::string& out_dir);

}  // namespace heatrl
