#pragma once

#include <map>
#include <string>
#include <vector>

#include "heatrl/bau.hpp"
#include "heatrl/harness.hpp"

namespace heatrl {

// All emitters write doubles with full round-trip precision; the matching
// loaders exist so every artifact can be read back losslessly.

inline constexpr const char* kTrajectoryHeader =
    "t,timestamp,t_room_c,t_amb_c,i_solar_wm2,price_chf_per_kwh,u_proposed,u_safe,tau,"
    "u_min,u_max,window_active,filter_active,energy_kwh,cost_chf,reward,comfort_violation_k";

inline constexpr const char* kCurveHeader =
    "episode,reward_sum,reward_step_mean,moving_mean,noise_sigma,rb_reward_sum,"
    "rb_moving_mean";

inline constexpr const char* kBauHeader = "timestamp,energy_kwh,source";

void write_trajectory_csv(const Trajectory& traj, const TimeGrid& grid,
                          const std::string& path);
// Steps only; window outcomes live in the KPI report. dt is inferred from
// the timestamp column.
Trajectory load_trajectory_csv(const std::string& path);

void write_reward_curve_csv(const std::vector<EpisodePoint>& curve, const std::string& path);
std::vector<EpisodePoint> load_reward_curve_csv(const std::string& path);

void write_bau_csv(const BauProfile& profile, const TimeGrid& grid, const std::string& path);
BauProfile load_bau_csv(const std::string& path);

std::string kpi_report_json(const std::map<CaseId, KpiReport>& kpis,
                            const std::map<CaseId, Trajectory>& trajectories,
                            const std::string& bau_source);
void write_kpi_report(const std::map<CaseId, KpiReport>& kpis,
                      const std::map<CaseId, Trajectory>& trajectories,
                      const std::string& bau_source, const std::string& path);
std::map<CaseId, KpiReport> load_kpi_report(const std::string& path);

// Self-contained plots (no external renderer): stacked room-temperature /
// action / price panels with shaded flexibility windows, and a per-case
// KPI bar comparison.
std::string trajectory_svg(const Trajectory& traj, const TimeGrid& grid,
                           const ComfortBand& band, const std::string& title);
std::string kpi_svg(const std::map<CaseId, KpiReport>& kpis);

// Writes kpi_report.json, trajectory_<case>.csv/.svg per case, and
// kpi_comparison.svg into out_dir (created if missing). Tolerates an empty
// case map: the JSON is still written, plots are skipped.
void emit_report(const std::map<CaseId, KpiReport>& kpis,
                 const std::map<CaseId, Trajectory>& trajectories, const TimeGrid& grid,
                 const ComfortBand& band, const std::string& bau_source,
                 const std::string& out_dir);

}  // namespace heatrl
