#pragma once

#include <array>
#include <functional>
#include <optional>
#include <vector>

#include "heatrl/grid.hpp"

namespace heatrl {

// Lumped RC room model: one thermal capacitance coupled to ambient air, a
// neighboring room and solar gains, heated (or cooled) through a modulating
// valve u in [0, 1] on a rated electrical power.
struct ThermalParams {
    double capacitance_kwh_per_k = 2.0;        // C
    double resistance_ambient_k_per_kw = 5.0;  // R to ambient
    double resistance_neighbor_k_per_kw = 20.0;// R to neighbor room
    double solar_gain_kw_per_wm2 = 0.002;      // aperture: kW per (W/m^2)
    double rated_power_kw = 2.0;               // electrical, at u = 1
    double efficiency = 0.9;                   // electrical -> thermal
    int mode_sign = +1;                        // +1 heating, -1 cooling

    bool valid() const {
        return capacitance_kwh_per_k > 0 && resistance_ambient_k_per_kw > 0 &&
               resistance_neighbor_k_per_kw > 0 && rated_power_kw > 0 &&
               efficiency > 0 && efficiency <= 1.5 && (mode_sign == 1 || mode_sign == -1);
    }
};

// Per-step boundary conditions driving the room.
struct ExogenousSample {
    double t_amb_c = 0.0;
    double i_solar_wm2 = 0.0;
    double t_neigh_c = 0.0;
    double price_chf_per_kwh = 0.0;
};

// Physical bookkeeping owned by one episode runner.
struct EnvState {
    int t = 0;
    double t_room_c = 24.0;
    double last_action = 0.0;
    double e_window_kwh = 0.0;      // consumed inside the active window so far
    double e_bau_window_kwh = 0.0;  // reference consumption over the same steps
    double cumulative_cost_chf = 0.0;
    double cumulative_energy_kwh = 0.0;
};

// Optional data-driven correction added to the physical temperature update;
// stands in for learned unmodeled dynamics. Defaults to none (pure RC).
using ResidualHook = std::function<double(const EnvState&, const ExogenousSample&)>;

// One explicit-Euler step of the RC model; returns the next room temperature.
double step_thermal(const EnvState& state, double u, const ExogenousSample& ex,
                    const ThermalParams& p, double dt_hours,
                    const ResidualHook& residual = {});

// Electrical energy drawn by holding valve fraction u for dt hours.
double energy_of_action(double u, const ThermalParams& p, double dt_hours);

double cost_of_step(double energy_kwh, double price_chf_per_kwh);

// Reward weights. beta scales comfort violations, delta the (normalized)
// electricity price term, alpha1/alpha2 the in-window and terminal
// flexibility penalties. gamma is the shared discount factor.
struct RewardConfig {
    double beta = 20.0;
    double delta = 0.8;
    double alpha1 = 1.0;
    double alpha2 = 10.0;
    double gamma = 0.99;
    bool price_normalized = true;  // false: use the raw tariff in the reward

    bool valid() const {
        return beta >= 0 && delta >= 0 && alpha1 >= 0 && alpha2 >= 0 &&
               gamma > 0 && gamma < 1;
    }
};

// Active (or just-closed) flexibility window as the reward sees it: the
// request plus its resolved budget. budget_kwh is the committed V(F),
// possibly truncated to the physical ceiling; e_bau_full_kwh is the full
// reference consumption used to pro-rate the budget mid-window.
struct WindowStatus {
    int t_start = 0;
    int t_end = 0;
    double phi = 1.0;
    double budget_kwh = 0.0;
    double e_bau_full_kwh = 0.0;
};

// Comfort violation magnitude in K: 0 inside the band, distance to the
// nearer bound outside.
double comfort_violation_k(double t_room_c, const ComfortBand& band);

// Scalar reward. `state` is the situation being scored (the episode runner
// passes the post-step state so the action's consequences are credited to
// it); `u` is the applied action and `zeta` the tariff for the step.
double reward(const EnvState& state, double u, const ExogenousSample& ex,
              const ComfortBand& band, const RewardConfig& cfg,
              const std::optional<WindowStatus>& window,
              const NormSpec& price_spec);

// Normalization ranges for every observation component.
struct NormSet {
    NormSpec i_solar{0.0, 1000.0};
    NormSpec t_amb{-5.0, 15.0};
    NormSpec t_room{23.5, 25.0};
    NormSpec t_neigh{15.0, 30.0};
    NormSpec price{0.0, 0.4};
    NormSpec action{0.0, 1.0};
    NormSpec mode{-1.0, 1.0};
    NormSpec t_tostart{0.0, 96.0};
    NormSpec t_toend{0.0, 48.0};
    NormSpec e_bau{0.0, 1.0};
    NormSpec e_used{0.0, 1.5};
};

// Fixed observation layout. Physical components are min-max normalized to
// [0.1, 0.9]; the three cyclic time encodings contribute a (sin, cos) pair
// each in [-1, 1].
//
//   [0] i_solar   [1] t_amb    [2] t_room   [3] t_neigh
//   [4] sin hour  [5] cos hour [6] sin weekday [7] cos weekday
//   [8] sin season [9] cos season
//   [10] u (last action)       [11] mode sign
//   [12] t_tostart [13] t_toend [14] e_bau  [15] e_used
inline constexpr int kObservationSize = 16;
using AgentObservation = std::array<double, kObservationSize>;

// Window energy fractions feeding the observation; both are expressed as a
// fraction of the window's full reference energy and are 0 outside windows.
struct WindowEnergyView {
    double e_bau_frac = 0.0;   // reference consumption elapsed so far
    double e_used_frac = 0.0;  // actual consumption so far
};

AgentObservation observe(const EnvState& state, const ExogenousSample& ex,
                         const std::optional<FlexibilityRequest>& request,
                         const WindowEnergyView& window_energy,
                         const NormSet& norms, const TimeGrid& grid, int mode_sign);

// Everything physical about the controlled room, bundled so episode
// runners, BAU projections and reward evaluation share one source.
struct PlantConfig {
    ThermalParams thermal;
    ComfortBand band;
    NormSet norms;
    double t_room_initial_c = 24.0;

    bool valid() const { return thermal.valid() && band.valid(); }
};

}  // namespace heatrl
