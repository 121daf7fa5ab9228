#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "heatrl/grid.hpp"
#include "heatrl/rng.hpp"
#include "heatrl/thermal.hpp"

namespace heatrl {

// Boundary conditions for a simulation run: weather, neighbor temperature
// and tariff on a uniform grid, plus any flexibility requests that apply.
struct Scenario {
    TimeGrid grid;
    std::vector<ExogenousSample> exogenous;
    std::uint64_t rng_seed = 0;
    std::vector<FlexibilityRequest> requests;

    bool valid() const {
        return grid.valid() && exogenous.size() == static_cast<std::size_t>(grid.n_steps);
    }
};

// Synthetic winter scenario: sinusoidal daily ambient temperature with a
// per-day random offset, half-sine solar irradiance scaled by a daily
// clearness draw, fixed neighbor temperature, and a two-tier tariff with
// uniform noise. Stand-in data, not a building export.
struct ScenarioGenConfig {
    std::string start_timestamp = "2021-12-01T00:00";
    int n_days = 3;
    int step_minutes = 15;
    double t_amb_mean_c = 4.0;
    double t_amb_daily_amplitude_k = 4.0;
    double t_amb_day_offset_std_k = 2.0;
    double solar_peak_wm2 = 960.0;
    double solar_clearness_min = 0.25;
    int solar_rise_minute = 8 * 60;
    int solar_set_minute = 17 * 60;
    double t_neigh_c = 23.0;
    double price_day_chf = 0.30;
    double price_night_chf = 0.12;
    double price_noise_chf = 0.02;
    int price_day_start_hour = 7;
    int price_day_end_hour = 22;

    bool valid() const {
        return n_days > 0 && step_minutes > 0 && 1440 % step_minutes == 0 &&
               solar_peak_wm2 >= 0.0 && solar_clearness_min >= 0.0 &&
               solar_clearness_min <= 1.0 && solar_rise_minute < solar_set_minute &&
               price_day_chf >= 0.0 && price_night_chf >= 0.0 && price_noise_chf >= 0.0 &&
               price_day_start_hour < price_day_end_hour;
    }
};

Scenario generate_scenario(const ScenarioGenConfig& cfg, std::uint64_t seed);

// One flexibility request per whole day of the grid: the window lies after
// the announcement hour, lasts at most max_hours, and phi is uniform in
// [phi_low, phi_high].
struct RequestGenConfig {
    double phi_low = kPhiLowDefault;
    double phi_high = kPhiHighDefault;
    double max_hours = 10.0;
    int announce_hour = 8;

    bool valid() const {
        return phi_low <= phi_high && max_hours > 0.0 && announce_hour >= 0 &&
               announce_hour < 24;
    }
};

std::vector<FlexibilityRequest> generate_requests(const TimeGrid& grid,
                                                  const RequestGenConfig& cfg, Rng& rng);

// CSV exchange format: header
//   timestamp,t_amb_c,i_solar_wm2,t_neigh_c,price_chf_per_kwh
// one row per step, strictly uniform timestamp spacing.
Scenario load_scenario(const std::string& path);
void save_scenario(const Scenario& scenario, const std::string& path);

}  // namespace heatrl
