#include "heatrl/thermal.hpp"

#include <cmath>

#include "heatrl/errors.hpp"

namespace heatrl {

namespace {

constexpr double kPi = 3.14159265358979323846;

bool all_finite(std::initializer_list<double> xs) {
    for (double x : xs)
        if (!std::isfinite(x)) return false;
    return true;
}

}  // namespace

double step_thermal(const EnvState& state, double u, const ExogenousSample& ex,
                    const ThermalParams& p, double dt_hours,
                    const ResidualHook& residual) {
    if (!all_finite({state.t_room_c, u, ex.t_amb_c, ex.i_solar_wm2, ex.t_neigh_c, dt_hours}))
        throw NumericError("step_thermal: non-finite input");
    if (!p.valid()) throw ConfigError("step_thermal: invalid thermal parameters");
    if (u < 0.0 || u > 1.0) throw InputError("step_thermal: action outside [0,1]");
    if (dt_hours <= 0.0) throw InputError("step_thermal: non-positive step");

    const double flux_kw = (ex.t_amb_c - state.t_room_c) / p.resistance_ambient_k_per_kw +
                           (ex.t_neigh_c - state.t_room_c) / p.resistance_neighbor_k_per_kw +
                           p.solar_gain_kw_per_wm2 * ex.i_solar_wm2 +
                           p.mode_sign * p.efficiency * u * p.rated_power_kw;
    double next = state.t_room_c + dt_hours / p.capacitance_kwh_per_k * flux_kw;
    if (residual) next += residual(state, ex);
    if (!std::isfinite(next)) throw NumericError("step_thermal: non-finite result");
    return next;
}

double energy_of_action(double u, const ThermalParams& p, double dt_hours) {
    if (u < 0.0 || u > 1.0) throw InputError("energy_of_action: action outside [0,1]");
    return u * p.rated_power_kw * dt_hours;
}

double cost_of_step(double energy_kwh, double price_chf_per_kwh) {
    return energy_kwh * price_chf_per_kwh;
}

double comfort_violation_k(double t_room_c, const ComfortBand& band) {
    return std::max(t_room_c - band.t_max, 0.0) - std::min(t_room_c - band.t_min, 0.0);
}

double reward(const EnvState& state, double u, const ExogenousSample& ex,
              const ComfortBand& band, const RewardConfig& cfg,
              const std::optional<WindowStatus>& window,
              const NormSpec& price_spec) {
    const double r_temp = comfort_violation_k(state.t_room_c, band);
    const double zeta = cfg.price_normalized ? normalize(ex.price_chf_per_kwh, price_spec)
                                             : ex.price_chf_per_kwh;
    const double r_price = u * zeta;

    double r_flex = 0.0;
    if (window) {
        // Post-step convention: state.t is the time after applying u, so the
        // window's consumption is scored on steps t_start+1 .. t_end and the
        // terminal penalty lands on the action that closes the window.
        const bool in_window = state.t > window->t_start && state.t <= window->t_end;
        if (in_window) {
            const bool cap_mode = window->phi <= 1.0;  // under-consumption request
            const bool terminal = state.t == window->t_end;
            const double target =
                terminal ? window->budget_kwh
                         : (window->e_bau_full_kwh > 0.0
                                ? window->budget_kwh * (state.e_bau_window_kwh / window->e_bau_full_kwh)
                                : 0.0);
            constexpr double eps = 1e-9;
            const bool breached = cap_mode ? state.e_window_kwh > target + eps
                                           : state.e_window_kwh < target - eps;
            if (breached) r_flex = terminal ? cfg.alpha2 : cfg.alpha1;
        }
    }

    return -cfg.beta * r_temp - cfg.delta * r_price - r_flex;
}

AgentObservation observe(const EnvState& state, const ExogenousSample& ex,
                         const std::optional<FlexibilityRequest>& request,
                         const WindowEnergyView& window_energy,
                         const NormSet& norms, const TimeGrid& grid, int mode_sign) {
    AgentObservation obs{};
    obs[0] = normalize(ex.i_solar_wm2, norms.i_solar);
    obs[1] = normalize(ex.t_amb_c, norms.t_amb);
    obs[2] = normalize(state.t_room_c, norms.t_room);
    obs[3] = normalize(ex.t_neigh_c, norms.t_neigh);

    const double day_frac = grid.minute_of_day(state.t) / 1440.0;
    const double week_frac = (grid.day_of_week(state.t) + day_frac) / 7.0;
    const double year_frac = (grid.day_of_year(state.t) + day_frac) / 365.25;
    obs[4] = std::sin(2.0 * kPi * day_frac);
    obs[5] = std::cos(2.0 * kPi * day_frac);
    obs[6] = std::sin(2.0 * kPi * week_frac);
    obs[7] = std::cos(2.0 * kPi * week_frac);
    obs[8] = std::sin(2.0 * kPi * year_frac);
    obs[9] = std::cos(2.0 * kPi * year_frac);

    obs[10] = normalize(state.last_action, norms.action);
    obs[11] = normalize(static_cast<double>(mode_sign), norms.mode);

    const auto [to_start, to_end] = window_features(state.t, request);
    obs[12] = normalize(static_cast<double>(to_start), norms.t_tostart);
    obs[13] = normalize(static_cast<double>(to_end), norms.t_toend);
    obs[14] = normalize(window_energy.e_bau_frac, norms.e_bau);
    obs[15] = normalize(window_energy.e_used_frac, norms.e_used);
    return obs;
}

}  // namespace heatrl
