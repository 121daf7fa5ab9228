#include "heatrl/bau.hpp"

#include <algorithm>

#include "heatrl/errors.hpp"

namespace heatrl {

bool BauProfile::valid() const {
    return std::all_of(energy_kwh.begin(), energy_kwh.end(),
                       [](double e) { return e >= 0.0; });
}

BauProfile project_bau(const Scenario& scenario, Controller& policy,
                       const PlantConfig& plant, const std::string& source_tag) {
    if (!scenario.valid()) throw ConfigError("project_bau: inconsistent scenario");
    if (!plant.valid()) throw ConfigError("project_bau: invalid plant configuration");

    const double dt = scenario.grid.step_hours();
    BauProfile profile;
    profile.source = source_tag;
    profile.energy_kwh.resize(scenario.grid.n_steps);

    policy.reset();
    EnvState state;
    state.t_room_c = plant.t_room_initial_c;
    for (int t = 0; t < scenario.grid.n_steps; ++t) {
        const ExogenousSample& ex = scenario.exogenous[t];
        const AgentObservation obs = observe(state, ex, std::nullopt, WindowEnergyView{},
                                             plant.norms, scenario.grid,
                                             plant.thermal.mode_sign);
        const double u = std::clamp(policy.propose(obs, state, ex), 0.0, 1.0);
        profile.energy_kwh[t] = energy_of_action(u, plant.thermal, dt);
        state.t_room_c = step_thermal(state, u, ex, plant.thermal, dt);
        state.last_action = u;
        state.t = t + 1;
    }
    return profile;
}

double window_bau(const BauProfile& profile, const FlexibilityRequest& request) {
    validate_request(request);
    if (request.t_start < 0 ||
        static_cast<std::size_t>(request.t_end) > profile.energy_kwh.size())
        throw InputError("window_bau: window outside profile range");
    double sum = 0.0;
    for (int t = request.t_start; t < request.t_end; ++t) sum += profile.energy_kwh[t];
    return sum;
}

}  // namespace heatrl
