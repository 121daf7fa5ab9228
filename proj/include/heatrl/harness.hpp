#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "heatrl/bau.hpp"
#include "heatrl/controller.hpp"
#include "heatrl/ddpg.hpp"
#include "heatrl/safety_filter.hpp"
#include "heatrl/scenario.hpp"

namespace heatrl {

// The four evaluated control strategies.
enum class CaseId { RB, DRL_NOFLEX, DRL_FLEX, DRL_FLEX_RASF };

const char* to_string(CaseId id);
std::optional<CaseId> case_from_string(const std::string& name);

// One simulated control step, written after the action has been applied.
struct StepRecord {
    int t = 0;                  // index of the applied action
    double t_room_c = 0.0;      // room temperature after the step
    double t_amb_c = 0.0;
    double i_solar_wm2 = 0.0;
    double price_chf_per_kwh = 0.0;
    double u_proposed = 0.0;
    double u_safe = 0.0;        // equals u_proposed when the filter is idle
    double tau = 0.0;
    double u_min = 0.0;
    double u_max = 1.0;
    bool window_active = false;
    bool filter_active = false;
    double energy_kwh = 0.0;
    double cost_chf = 0.0;
    double reward = 0.0;
    double comfort_violation_k = 0.0;
};

// Ledger of one completed flexibility window. budget_kwh is the committed
// V(F) = phi * E_BAU; compliance compares consumption against it with the
// phi-dependent inequality.
struct WindowOutcome {
    FlexibilityRequest request;
    double e_bau_kwh = 0.0;
    double budget_kwh = 0.0;
    double consumed_kwh = 0.0;
    bool compliant = false;
};

struct Trajectory {
    std::vector<StepRecord> steps;
    std::vector<WindowOutcome> windows;
    double reward_sum = 0.0;
    double dt_hours = 0.25;
};

// Steps one scenario: observe -> propose -> (filter) -> integrate ->
// bookkeeping -> reward. Owns the window and filter state so training and
// evaluation share identical semantics.
class EpisodeEngine {
public:
    struct Options {
        bool expose_windows = true;  // requests visible to the observation
        bool use_filter = false;
    };

    EpisodeEngine(const Scenario& scenario, const PlantConfig& plant,
                  const RewardConfig& reward_cfg, const FilterConfig& filter_cfg,
                  const BauProfile* bau, Options opts);

    bool done() const { return state_.t >= scenario_->grid.n_steps; }
    // Observation at the current (pre-step) time; after the final step this
    // is the terminal observation, reusing the last exogenous sample.
    AgentObservation observation() const;
    const EnvState& state() const { return state_; }
    const ExogenousSample& current_exogenous() const;

    struct Outcome {
        StepRecord record;
        bool terminal = false;
    };
    Outcome step(double u_proposed);

    const std::vector<WindowOutcome>& windows() const { return windows_; }
    double reward_sum() const { return reward_sum_; }
    double dt_hours() const { return dt_hours_; }

private:
    const FlexibilityRequest* visible_request(int t) const;
    void open_if_due(int t);

    const Scenario* scenario_;
    PlantConfig plant_;
    RewardConfig reward_cfg_;
    Options opts_;
    const BauProfile* bau_;
    double dt_hours_;
    SafetyFilter filter_;
    EnvState state_;
    std::size_t next_request_ = 0;          // first request not yet closed
    const FlexibilityRequest* open_ = nullptr;
    double open_e_bau_kwh_ = 0.0;
    double open_budget_kwh_ = 0.0;          // official committed V(F)
    std::vector<WindowOutcome> windows_;
    double reward_sum_ = 0.0;
};

Trajectory run_episode(const Scenario& scenario, Controller& controller,
                       const PlantConfig& plant, const RewardConfig& reward_cfg,
                       const FilterConfig& filter_cfg, const BauProfile* bau,
                       EpisodeEngine::Options opts);

// Which policy sizes the flexibility budgets.
enum class BauSource { Rb, DrlNoflex };

struct TrainConfig {
    int episodes = 2000;
    bool include_requests = true;   // false: strip requests (no-flex curriculum)
    int moving_window = 50;
    bool early_stop = false;        // stop once the moving mean beats the baseline
    int early_stop_min_episodes = 100;
    double early_stop_margin = 0.0;
    int checkpoint_every = 0;       // 0: no periodic checkpoints

    bool valid() const {
        return episodes >= 0 && moving_window > 0 && early_stop_min_episodes >= 1 &&
               early_stop_margin >= 0.0 && checkpoint_every >= 0;
    }
};

struct EpisodePoint {
    int episode = 0;           // 1-based
    double reward_sum = 0.0;
    double reward_step_mean = 0.0;
    double moving_mean = 0.0;  // of reward_sum, over the last moving_window episodes
    double noise_sigma = 0.0;
    double rb_reward_sum = 0.0;   // hysteresis baseline on the same episode
    double rb_moving_mean = 0.0;
};

struct TrainResult {
    std::vector<EpisodePoint> curve;
    int episodes_run = 0;
    bool early_stopped = false;
    bool diverged = false;  // non-finite loss; training stopped, curve truncated
};

// Trains in place, cycling through the scenario list one episode each.
// bau_profiles must align with scenarios whenever requests are kept.
// on_checkpoint fires every checkpoint_every completed episodes.
TrainResult train(DdpgAgent& agent, const std::vector<Scenario>& scenarios,
                  const std::vector<BauProfile>& bau_profiles, const PlantConfig& plant,
                  const RewardConfig& reward_cfg, const TrainConfig& cfg,
                  const std::function<void(int, DdpgAgent&)>& on_checkpoint = {});

struct KpiReport {
    double comfort_violation_kh = 0.0;
    double energy_kwh = 0.0;
    double cost_chf = 0.0;
    double flex_compliance_rate = 1.0;  // 1.0 when no windows were measured
    int n_windows = 0;
    int n_compliant = 0;
    double reward_sum = 0.0;

    bool valid() const {
        return comfort_violation_kh >= 0.0 && energy_kwh >= 0.0 && cost_chf >= 0.0 &&
               flex_compliance_rate >= 0.0 && flex_compliance_rate <= 1.0;
    }
};

// Aggregates a trajectory: Kelvin-hour comfort violations, electrical
// energy, tariff cost, and per-window budget compliance.
KpiReport evaluate_kpis(const Trajectory& trajectory, const ComfortBand& band,
                        const std::vector<WindowOutcome>& windows);

struct CompareResult {
    BauProfile bau;
    std::map<CaseId, Trajectory> trajectories;
    std::map<CaseId, KpiReport> kpis;
};

// Runs all four strategies on the identical scenario and request list.
// The no-flexibility policy doubles as the BAU reference unless bau_source
// selects the hysteresis baseline.
CompareResult compare_cases(const Scenario& scenario, DdpgAgent& noflex_agent,
                            DdpgAgent& flex_agent, const PlantConfig& plant,
                            const RewardConfig& reward_cfg, const FilterConfig& filter_cfg,
                            BauSource bau_source);

}  // namespace heatrl
