#pragma once

#include <string>
#include <vector>

#include "heatrl/controller.hpp"
#include "heatrl/scenario.hpp"
#include "heatrl/thermal.hpp"

namespace heatrl {

// Reference consumption: what the building would have drawn with no
// flexibility request in play. Sizes every window budget.
struct BauProfile {
    std::vector<double> energy_kwh;  // per-step, aligned to the scenario grid
    std::string source;              // policy tag: "rb" or "drl-noflex"

    bool valid() const;
};

// Replays the scenario under `policy` with requests hidden and no filter,
// recording the electrical energy of every step. Deterministic for a frozen
// policy (run noiseless).
BauProfile project_bau(const Scenario& scenario, Controller& policy,
                       const PlantConfig& plant, const std::string& source_tag);

// Reference energy committed over one window: profile entries t in
// [t_start, t_end). Throws InputError when the window leaves the profile.
double window_bau(const BauProfile& profile, const FlexibilityRequest& request);

}  // namespace heatrl
