#include "heatrl/harness.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>

#include "heatrl/errors.hpp"

namespace heatrl {

namespace {

constexpr double kBudgetEps = 1e-9;

double unit_norm(double x, const NormSpec& spec) {
    const double y = (x - spec.raw_min) / (spec.raw_max - spec.raw_min);
    return std::clamp(y, 0.0, 1.0);
}

bool window_compliant(const WindowOutcome& w) {
    if (w.request.phi <= 1.0) return w.consumed_kwh <= w.budget_kwh + kBudgetEps;
    return w.consumed_kwh >= w.budget_kwh - kBudgetEps;
}

}  // namespace

const char* to_string(CaseId id) {
    switch (id) {
        case CaseId::RB: return "RB";
        case CaseId::DRL_NOFLEX: return "DRL_NOFLEX";
        case CaseId::DRL_FLEX: return "DRL_FLEX";
        case CaseId::DRL_FLEX_RASF: return "DRL_FLEX_RASF";
    }
    return "?";
}

std::optional<CaseId> case_from_string(const std::string& name) {
    for (CaseId id : {CaseId::RB, CaseId::DRL_NOFLEX, CaseId::DRL_FLEX, CaseId::DRL_FLEX_RASF})
        if (name == to_string(id)) return id;
    return std::nullopt;
}

EpisodeEngine::EpisodeEngine(const Scenario& scenario, const PlantConfig& plant,
                             const RewardConfig& reward_cfg, const FilterConfig& filter_cfg,
                             const BauProfile* bau, Options opts)
    : scenario_(&scenario),
      plant_(plant),
      reward_cfg_(reward_cfg),
      opts_(opts),
      bau_(bau),
      dt_hours_(scenario.grid.step_hours()),
      filter_(filter_cfg, plant.thermal, scenario.grid.step_hours()) {
    if (!scenario.valid()) throw ConfigError("episode: inconsistent scenario");
    if (!plant.valid()) throw ConfigError("episode: invalid plant configuration");
    if (!reward_cfg.valid()) throw ConfigError("episode: invalid reward configuration");
    if (!filter_cfg.valid()) throw ConfigError("episode: invalid filter configuration");

    int prev_end = 0;
    for (const FlexibilityRequest& r : scenario.requests) {
        if (r.t_start < prev_end)
            throw InputError("episode: flexibility requests overlap or are unsorted");
        if (r.announced_at < 0 || r.announced_at > r.t_start || r.t_end > scenario.grid.n_steps ||
            r.t_start >= r.t_end || r.phi <= 0.0)
            throw InputError("episode: flexibility request outside the grid");
        prev_end = r.t_end;
    }
    if (!scenario.requests.empty()) {
        if (bau_ == nullptr ||
            bau_->energy_kwh.size() != static_cast<std::size_t>(scenario.grid.n_steps))
            throw ConfigError("episode: requests present but no aligned reference profile");
    }
    state_.t_room_c = plant.t_room_initial_c;
}

const ExogenousSample& EpisodeEngine::current_exogenous() const {
    const int t = std::min(state_.t, scenario_->grid.n_steps - 1);
    return scenario_->exogenous[t];
}

const FlexibilityRequest* EpisodeEngine::visible_request(int t) const {
    if (next_request_ >= scenario_->requests.size()) return nullptr;
    const FlexibilityRequest& r = scenario_->requests[next_request_];
    if (r.announced_at <= t && t < r.t_end) return &r;
    return nullptr;
}

void EpisodeEngine::open_if_due(int t) {
    if (open_ != nullptr || next_request_ >= scenario_->requests.size()) return;
    const FlexibilityRequest& r = scenario_->requests[next_request_];
    if (t != r.t_start) return;
    open_ = &r;
    open_e_bau_kwh_ = window_bau(*bau_, r);
    open_budget_kwh_ = flexibility_budget(r, open_e_bau_kwh_);
    if (opts_.use_filter) filter_.open_window(r, open_e_bau_kwh_);
}

AgentObservation EpisodeEngine::observation() const {
    const int t = state_.t;
    std::optional<FlexibilityRequest> visible;
    if (opts_.expose_windows) {
        if (const FlexibilityRequest* r = visible_request(t)) visible = *r;
    }
    WindowEnergyView view;
    if (open_ != nullptr && open_e_bau_kwh_ > 0.0) {
        view.e_bau_frac = state_.e_bau_window_kwh / open_e_bau_kwh_;
        view.e_used_frac = state_.e_window_kwh / open_e_bau_kwh_;
    }
    return observe(state_, current_exogenous(), visible, view, plant_.norms, scenario_->grid,
                   plant_.thermal.mode_sign);
}

EpisodeEngine::Outcome EpisodeEngine::step(double u_proposed) {
    if (done()) throw ContractError("episode: step past the end of the scenario");
    if (!std::isfinite(u_proposed)) throw NumericError("episode: non-finite action");

    const int t = state_.t;
    const ExogenousSample& ex = scenario_->exogenous[t];
    open_if_due(t);
    const bool in_window = open_ != nullptr;

    const double u_prop = std::clamp(u_proposed, 0.0, 1.0);
    FilterDecision dec;
    dec.u_proposed = u_prop;
    dec.u_safe = u_prop;
    if (opts_.use_filter && filter_.window_active()) {
        dec = filter_.apply(u_prop, unit_norm(state_.t_room_c, filter_.config().t_room_spec),
                            unit_norm(ex.price_chf_per_kwh, filter_.config().price_spec));
    }
    const double u = dec.u_safe;

    const double energy = energy_of_action(u, plant_.thermal, dt_hours_);
    const double cost = cost_of_step(energy, ex.price_chf_per_kwh);
    const double t_next = step_thermal(state_, u, ex, plant_.thermal, dt_hours_);

    state_.t = t + 1;
    state_.t_room_c = t_next;
    state_.last_action = u;
    state_.cumulative_energy_kwh += energy;
    state_.cumulative_cost_chf += cost;
    if (in_window) {
        state_.e_window_kwh += energy;
        state_.e_bau_window_kwh += bau_->energy_kwh[t];
        if (opts_.use_filter && filter_.window_active()) filter_.advance(u);
    }

    std::optional<WindowStatus> ws;
    if (in_window) {
        const double committed =
            opts_.use_filter ? filter_.committed_budget_kwh() : open_budget_kwh_;
        ws = WindowStatus{open_->t_start, open_->t_end, open_->phi, committed, open_e_bau_kwh_};
    }
    const double r =
        reward(state_, u, ex, plant_.band, reward_cfg_, ws, plant_.norms.price);
    reward_sum_ += r;

    Outcome out;
    StepRecord& rec = out.record;
    rec.t = t;
    rec.t_room_c = state_.t_room_c;
    rec.t_amb_c = ex.t_amb_c;
    rec.i_solar_wm2 = ex.i_solar_wm2;
    rec.price_chf_per_kwh = ex.price_chf_per_kwh;
    rec.u_proposed = u_prop;
    rec.u_safe = u;
    rec.tau = dec.tau;
    rec.u_min = dec.u_min;
    rec.u_max = dec.u_max;
    rec.window_active = in_window;
    rec.filter_active = dec.active;
    rec.energy_kwh = energy;
    rec.cost_chf = cost;
    rec.reward = r;
    rec.comfort_violation_k = comfort_violation_k(state_.t_room_c, plant_.band);

    if (in_window && state_.t == open_->t_end) {
        WindowOutcome w;
        w.request = *open_;
        w.e_bau_kwh = open_e_bau_kwh_;
        w.budget_kwh = open_budget_kwh_;
        w.consumed_kwh = state_.e_window_kwh;
        w.compliant = window_compliant(w);
        windows_.push_back(w);
        state_.e_window_kwh = 0.0;
        state_.e_bau_window_kwh = 0.0;
        if (opts_.use_filter) filter_.close_window();
        open_ = nullptr;
        ++next_request_;
    }

    out.terminal = done();
    return out;
}

Trajectory run_episode(const Scenario& scenario, Controller& controller,
                       const PlantConfig& plant, const RewardConfig& reward_cfg,
                       const FilterConfig& filter_cfg, const BauProfile* bau,
                       EpisodeEngine::Options opts) {
    EpisodeEngine engine(scenario, plant, reward_cfg, filter_cfg, bau, opts);
    controller.reset();
    Trajectory traj;
    traj.dt_hours = engine.dt_hours();
    traj.steps.reserve(scenario.grid.n_steps);
    while (!engine.done()) {
        const AgentObservation obs = engine.observation();
        const double u = controller.propose(obs, engine.state(), engine.current_exogenous());
        traj.steps.push_back(engine.step(u).record);
    }
    traj.windows = engine.windows();
    traj.reward_sum = engine.reward_sum();
    return traj;
}

TrainResult train(DdpgAgent& agent, const std::vector<Scenario>& scenarios,
                  const std::vector<BauProfile>& bau_profiles, const PlantConfig& plant,
                  const RewardConfig& reward_cfg, const TrainConfig& cfg,
                  const std::function<void(int, DdpgAgent&)>& on_checkpoint) {
    if (scenarios.empty()) throw InputError("train: at least one scenario required");
    if (!cfg.valid()) throw ConfigError("train: invalid training configuration");

    std::vector<Scenario> pool = scenarios;
    bool any_requests = false;
    for (Scenario& sc : pool) {
        if (!cfg.include_requests) sc.requests.clear();
        any_requests = any_requests || !sc.requests.empty();
    }
    if (any_requests && bau_profiles.size() != scenarios.size())
        throw ConfigError("train: one reference profile per scenario required");

    const EpisodeEngine::Options opts{cfg.include_requests, false};
    const FilterConfig fcfg;

    TrainResult result;
    std::vector<double> rb_reward(pool.size(), std::numeric_limits<double>::quiet_NaN());
    std::deque<double> recent, rb_recent;
    double recent_sum = 0.0, rb_recent_sum = 0.0;

    for (int ep = 0; ep < cfg.episodes; ++ep) {
        const std::size_t idx = static_cast<std::size_t>(ep) % pool.size();
        const Scenario& sc = pool[idx];
        const BauProfile* bau = sc.requests.empty() ? nullptr : &bau_profiles[idx];
        const double progress = cfg.episodes > 1 ? double(ep) / (cfg.episodes - 1) : 1.0;
        const double sigma = agent.noise_sigma_at(progress);

        if (std::isnan(rb_reward[idx])) {
            RbController rb(plant.band);
            rb_reward[idx] =
                run_episode(sc, rb, plant, reward_cfg, fcfg, bau, opts).reward_sum;
        }

        EpisodeEngine engine(sc, plant, reward_cfg, fcfg, bau, opts);
        double ep_reward = 0.0;
        AgentObservation obs = engine.observation();
        bool diverged = false;
        while (!engine.done()) {
            const double u = agent.act(obs, sigma);
            const EpisodeEngine::Outcome out = engine.step(u);
            const AgentObservation next_obs = engine.observation();
            agent.remember({obs, u, out.record.reward, next_obs, out.terminal});
            try {
                agent.update();
            } catch (const TrainingError&) {
                diverged = true;
                break;
            }
            obs = next_obs;
            ep_reward += out.record.reward;
        }
        if (diverged) {
            result.diverged = true;
            break;
        }

        recent.push_back(ep_reward);
        recent_sum += ep_reward;
        rb_recent.push_back(rb_reward[idx]);
        rb_recent_sum += rb_reward[idx];
        if (static_cast<int>(recent.size()) > cfg.moving_window) {
            recent_sum -= recent.front();
            recent.pop_front();
            rb_recent_sum -= rb_recent.front();
            rb_recent.pop_front();
        }

        EpisodePoint pt;
        pt.episode = ep + 1;
        pt.reward_sum = ep_reward;
        pt.reward_step_mean = ep_reward / sc.grid.n_steps;
        pt.moving_mean = recent_sum / recent.size();
        pt.noise_sigma = sigma;
        pt.rb_reward_sum = rb_reward[idx];
        pt.rb_moving_mean = rb_recent_sum / rb_recent.size();
        result.curve.push_back(pt);
        result.episodes_run = ep + 1;

        if (cfg.checkpoint_every > 0 && (ep + 1) % cfg.checkpoint_every == 0 && on_checkpoint)
            on_checkpoint(ep + 1, agent);

        if (cfg.early_stop && ep + 1 >= cfg.early_stop_min_episodes &&
            pt.moving_mean > pt.rb_moving_mean + cfg.early_stop_margin) {
            result.early_stopped = true;
            break;
        }
    }
    return result;
}

KpiReport evaluate_kpis(const Trajectory& trajectory, const ComfortBand& band,
                        const std::vector<WindowOutcome>& windows) {
    KpiReport report;
    for (const StepRecord& rec : trajectory.steps) {
        report.comfort_violation_kh +=
            comfort_violation_k(rec.t_room_c, band) * trajectory.dt_hours;
        report.energy_kwh += rec.energy_kwh;
        report.cost_chf += rec.cost_chf;
    }
    report.n_windows = static_cast<int>(windows.size());
    for (const WindowOutcome& w : windows)
        if (window_compliant(w)) ++report.n_compliant;
    report.flex_compliance_rate =
        windows.empty() ? 1.0 : double(report.n_compliant) / report.n_windows;
    report.reward_sum = trajectory.reward_sum;
    return report;
}

CompareResult compare_cases(const Scenario& scenario, DdpgAgent& noflex_agent,
                            DdpgAgent& flex_agent, const PlantConfig& plant,
                            const RewardConfig& reward_cfg, const FilterConfig& filter_cfg,
                            BauSource bau_source) {
    CompareResult result;
    if (bau_source == BauSource::Rb) {
        RbController rb(plant.band);
        result.bau = project_bau(scenario, rb, plant, "rb");
    } else {
        DdpgController noflex(noflex_agent, 0.0);
        result.bau = project_bau(scenario, noflex, plant, "drl-noflex");
    }

    const auto run = [&](CaseId id, Controller& c, EpisodeEngine::Options opts) {
        Trajectory traj =
            run_episode(scenario, c, plant, reward_cfg, filter_cfg, &result.bau, opts);
        result.kpis[id] = evaluate_kpis(traj, plant.band, traj.windows);
        result.trajectories[id] = std::move(traj);
    };

    RbController rb(plant.band);
    DdpgController noflex(noflex_agent, 0.0);
    DdpgController flex(flex_agent, 0.0);
    run(CaseId::RB, rb, {false, false});
    run(CaseId::DRL_NOFLEX, noflex, {false, false});
    run(CaseId::DRL_FLEX, flex, {true, false});
    run(CaseId::DRL_FLEX_RASF, flex, {true, true});
    return result;
}

}  // namespace heatrl
