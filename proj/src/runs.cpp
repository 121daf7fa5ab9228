#include "heatrl/runs.hpp"

#include <filesystem>
#include <fstream>
#include <optional>

#include "heatrl/errors.hpp"
#include "heatrl/report.hpp"

namespace heatrl {

namespace {

namespace fs = std::filesystem;

fs::path ensure_out_dir(const std::string& out_dir) {
    if (out_dir.empty()) throw ConfigError("output directory is empty");
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) throw IoError("cannot create output directory: " + out_dir);
    return fs::path(out_dir);
}

void echo_config(const RunConfig& cfg, const fs::path& dir, const std::string& out_dir) {
    RunConfig resolved = cfg;
    resolved.output_dir = out_dir;
    std::ofstream os(dir / "effective_config.json", std::ios::trunc);
    if (!os) throw IoError("cannot write effective_config.json");
    os << resolved.to_json_text();
    os.flush();
    if (!os) throw IoError("write failed: effective_config.json");
}

DdpgAgent load_agent(const std::string& path, const char* purpose) {
    if (path.empty())
        throw ConfigError(std::string("no checkpoint configured for ") + purpose);
    return DdpgAgent::load_checkpoint(path);
}

// Splits "name.ext" so periodic checkpoints become "name_ep<N>.ext".
std::string periodic_name(const std::string& out_name, int episode) {
    const std::size_t dot = out_name.find_last_of('.');
    const std::string stem = dot == std::string::npos ? out_name : out_name.substr(0, dot);
    const std::string ext = dot == std::string::npos ? "" : out_name.substr(dot);
    return stem + "_ep" + std::to_string(episode) + ext;
}

struct CaseSetup {
    std::optional<DdpgAgent> agent;  // empty for the rule-based case
    EpisodeEngine::Options opts{false, false};
};

CaseSetup case_setup(CaseId id, const RunConfig& cfg, const std::string& checkpoint_path) {
    CaseSetup setup;
    switch (id) {
        case CaseId::RB:
            setup.opts = {false, false};
            break;
        case CaseId::DRL_NOFLEX:
            setup.agent = load_agent(
                checkpoint_path.empty() ? cfg.checkpoints.noflex : checkpoint_path,
                "the no-flexibility policy");
            setup.opts = {false, false};
            break;
        case CaseId::DRL_FLEX:
            setup.agent = load_agent(
                checkpoint_path.empty() ? cfg.checkpoints.flex : checkpoint_path,
                "the flexibility policy");
            setup.opts = {true, false};
            break;
        case CaseId::DRL_FLEX_RASF:
            setup.agent = load_agent(
                checkpoint_path.empty() ? cfg.checkpoints.flex : checkpoint_path,
                "the flexibility policy");
            setup.opts = {true, true};
            break;
    }
    return setup;
}

// Reference profile for sizing budgets; reuse `same` when the evaluated
// case already runs the no-flexibility policy.
BauProfile resolve_bau(const RunConfig& cfg, const Scenario& sc, DdpgAgent* same) {
    if (cfg.bau_source == BauSource::Rb) {
        RbController rb(cfg.plant.band);
        return project_bau(sc, rb, cfg.plant, "rb");
    }
    if (same != nullptr) {
        DdpgController ctrl(*same, 0.0);
        return project_bau(sc, ctrl, cfg.plant, "drl-noflex");
    }
    DdpgAgent noflex = load_agent(cfg.checkpoints.noflex, "the BAU reference policy");
    DdpgController ctrl(noflex, 0.0);
    return project_bau(sc, ctrl, cfg.plant, "drl-noflex");
}

KpiReport run_one_case(const RunConfig& cfg, const std::string& checkpoint_path,
                       const std::string& scenario_override, const std::string& case_name,
                       const std::string& out_dir, bool with_kpi_files) {
    const std::optional<CaseId> id = case_from_string(case_name);
    if (!id) throw ConfigError("unknown case '" + case_name + "'");
    const fs::path dir = ensure_out_dir(out_dir);

    const Scenario sc = resolve_scenario(cfg, scenario_override);
    CaseSetup setup = case_setup(*id, cfg, checkpoint_path);
    DdpgAgent* reuse =
        (*id == CaseId::DRL_NOFLEX && setup.agent) ? &*setup.agent : nullptr;
    const BauProfile bau = sc.requests.empty() ? BauProfile{} : resolve_bau(cfg, sc, reuse);

    Trajectory traj;
    if (setup.agent) {
        DdpgController ctrl(*setup.agent, 0.0);
        traj = run_episode(sc, ctrl, cfg.plant, cfg.reward, cfg.filter,
                           sc.requests.empty() ? nullptr : &bau, setup.opts);
    } else {
        RbController ctrl(cfg.plant.band);
        traj = run_episode(sc, ctrl, cfg.plant, cfg.reward, cfg.filter,
                           sc.requests.empty() ? nullptr : &bau, setup.opts);
    }
    const KpiReport kpi = evaluate_kpis(traj, cfg.plant.band, traj.windows);

    std::map<CaseId, KpiReport> kpis;
    std::map<CaseId, Trajectory> trajectories;
    if (with_kpi_files) kpis[*id] = kpi;
    trajectories[*id] = std::move(traj);
    if (with_kpi_files) {
        emit_report(kpis, trajectories, sc.grid, cfg.plant.band, to_string(cfg.bau_source),
                    out_dir);
        if (!sc.requests.empty())
            write_bau_csv(bau, sc.grid, (dir / "bau.csv").string());
    } else {
        const std::string name = to_string(*id);
        write_trajectory_csv(trajectories[*id], sc.grid,
                             (dir / ("trajectory_" + name + ".csv")).string());
        std::ofstream os(dir / ("trajectory_" + name + ".svg"), std::ios::trunc);
        if (!os) throw IoError("cannot write trajectory svg");
        os << trajectory_svg(trajectories[*id], sc.grid, cfg.plant.band, name);
    }
    echo_config(cfg, dir, out_dir);
    return kpi;
}

}  // namespace

Scenario resolve_scenario(const RunConfig& cfg, const std::string& scenario_override) {
    const std::string path = scenario_override.empty() ? cfg.scenario.path : scenario_override;
    Scenario sc;
    if (!path.empty()) {
        sc = load_scenario(path);
        sc.rng_seed = cfg.scenario.seed;
    } else {
        sc = generate_scenario(cfg.scenario.gen, cfg.scenario.seed);
    }
    if (cfg.requests.enabled) {
        Rng rng(cfg.requests.seed);
        sc.requests = generate_requests(sc.grid, cfg.requests.gen, rng);
    }
    return sc;
}

void run_generate(const RunConfig& cfg, const std::string& out_dir) {
    const fs::path dir = ensure_out_dir(out_dir);
    const Scenario sc = generate_scenario(cfg.scenario.gen, cfg.scenario.seed);
    save_scenario(sc, (dir / "scenario.csv").string());
    echo_config(cfg, dir, out_dir);
}

void run_train(RunConfig cfg, long episodes_override, long long seed_override,
               const std::string& out_dir) {
    if (episodes_override >= 0) cfg.train.cfg.episodes = static_cast<int>(episodes_override);
    if (seed_override >= 0) cfg.ddpg_seed = static_cast<std::uint64_t>(seed_override);
    const fs::path dir = ensure_out_dir(out_dir);

    std::vector<Scenario> pool;
    pool.reserve(cfg.train.n_scenarios);
    for (int i = 0; i < cfg.train.n_scenarios; ++i) {
        Scenario sc = generate_scenario(cfg.scenario.gen, cfg.scenario.seed + i);
        if (cfg.train.cfg.include_requests && cfg.requests.enabled) {
            Rng rng(cfg.requests.seed + i);
            sc.requests = generate_requests(sc.grid, cfg.requests.gen, rng);
        }
        pool.push_back(std::move(sc));
    }

    std::vector<BauProfile> baus;
    if (cfg.train.cfg.include_requests && cfg.requests.enabled) {
        baus.reserve(pool.size());
        std::optional<DdpgAgent> noflex;
        if (cfg.bau_source == BauSource::DrlNoflex)
            noflex = load_agent(cfg.checkpoints.noflex, "the BAU reference policy");
        for (const Scenario& sc : pool) {
            if (noflex) {
                DdpgController ctrl(*noflex, 0.0);
                baus.push_back(project_bau(sc, ctrl, cfg.plant, "drl-noflex"));
            } else {
                RbController rb(cfg.plant.band);
                baus.push_back(project_bau(sc, rb, cfg.plant, "rb"));
            }
        }
    }

    DdpgAgent agent(kObservationSize, cfg.ddpg, cfg.ddpg_seed);
    const TrainResult result = train(
        agent, pool, baus, cfg.plant, cfg.reward, cfg.train.cfg,
        [&](int episode, DdpgAgent& a) {
            a.save_checkpoint((dir / periodic_name(cfg.train.out_name, episode)).string());
        });

    agent.save_checkpoint((dir / cfg.train.out_name).string());
    write_reward_curve_csv(result.curve, (dir / "reward_curve.csv").string());
    echo_config(cfg, dir, out_dir);
    if (result.diverged)
        throw TrainingError("training diverged after " +
                            std::to_string(result.episodes_run) +
                            " episodes; last good checkpoint saved");
}

void run_bau(const RunConfig& cfg, const std::string& checkpoint_path,
             const std::string& scenario_override, const std::string& out_dir) {
    const fs::path dir = ensure_out_dir(out_dir);
    Scenario sc = resolve_scenario(cfg, scenario_override);
    sc.requests.clear();  // the reference run never sees requests
    DdpgAgent agent = load_agent(checkpoint_path, "the BAU projection");
    DdpgController ctrl(agent, 0.0);
    const BauProfile profile = project_bau(sc, ctrl, cfg.plant, "drl-noflex");
    write_bau_csv(profile, sc.grid, (dir / "bau.csv").string());
    echo_config(cfg, dir, out_dir);
}

KpiReport run_evaluate(const RunConfig& cfg, const std::string& checkpoint_path,
                       const std::string& scenario_override, const std::string& case_name,
                       const std::string& out_dir) {
    return run_one_case(cfg, checkpoint_path, scenario_override,
                        case_name.empty() ? cfg.eval_case : case_name, out_dir, true);
}

void run_compare(const RunConfig& cfg, const std::string& out_dir) {
    const fs::path dir = ensure_out_dir(out_dir);
    const Scenario sc = resolve_scenario(cfg);
    DdpgAgent noflex = load_agent(cfg.checkpoints.noflex, "the no-flexibility policy");
    DdpgAgent flex = load_agent(cfg.checkpoints.flex, "the flexibility policy");
    const CompareResult result = compare_cases(sc, noflex, flex, cfg.plant, cfg.reward,
                                               cfg.filter, cfg.bau_source);
    emit_report(result.kpis, result.trajectories, sc.grid, cfg.plant.band,
                result.bau.source, out_dir);
    write_bau_csv(result.bau, sc.grid, (dir / "bau.csv").string());
    echo_config(cfg, dir, out_dir);
}

KpiReport run_simulate(const RunConfig& cfg, const std::string& case_name,
                       const std::string& out_dir) {
    return run_one_case(cfg, "", "", case_name.empty() ? cfg.eval_case : case_name, out_dir,
                        false);
}

}  // namespace heatrl
