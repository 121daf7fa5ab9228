#include "heatrl/heatrl.h"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <memory>
#include <optional>
#include <string>

#include "heatrl/bau.hpp"
#include "heatrl/config.hpp"
#include "heatrl/controller.hpp"
#include "heatrl/ddpg.hpp"
#include "heatrl/errors.hpp"
#include "heatrl/harness.hpp"
#include "heatrl/runs.hpp"
#include "heatrl/safety_filter.hpp"

#ifndef HEATRL_VERSION
#define HEATRL_VERSION "0.0.0"
#endif

struct heatrl_agent {
    heatrl::DdpgAgent impl;
};

// Owns the scenario and reference profile the engine points into, so the
// handle must never move after construction.
struct heatrl_env {
    heatrl::RunConfig cfg;
    heatrl::Scenario scenario;
    heatrl::BauProfile bau;
    std::unique_ptr<heatrl::EpisodeEngine> engine;
};

struct heatrl_filter {
    heatrl::SafetyFilter impl;
};

namespace {

using namespace heatrl;

thread_local std::string t_last_error;

template <typename Fn>
heatrl_status guarded(Fn&& fn) noexcept {
    try {
        fn();
        t_last_error.clear();
        return HEATRL_OK;
    } catch (const ConfigError& e) {
        t_last_error = e.what();
        return HEATRL_E_CONFIG;
    } catch (const ParseError& e) {
        t_last_error = e.what();
        return HEATRL_E_PARSE;
    } catch (const IoError& e) {
        t_last_error = e.what();
        return HEATRL_E_IO;
    } catch (const InputError& e) {
        t_last_error = e.what();
        return HEATRL_E_INPUT;
    } catch (const NumericError& e) {
        t_last_error = e.what();
        return HEATRL_E_NUMERIC;
    } catch (const TrainingError& e) {
        t_last_error = e.what();
        return HEATRL_E_TRAINING;
    } catch (const ContractError& e) {
        t_last_error = e.what();
        return HEATRL_E_CONTRACT;
    } catch (const std::exception& e) {
        t_last_error = e.what();
        return HEATRL_E_INTERNAL;
    } catch (...) {
        t_last_error = "unknown error";
        return HEATRL_E_INTERNAL;
    }
}

const char* require(const char* value, const char* what) {
    if (value == nullptr || *value == '\0')
        throw InputError(std::string(what) + " is required");
    return value;
}

std::string optional_arg(const char* value) { return value == nullptr ? "" : value; }

template <typename T>
T* require_handle(T* handle) {
    if (handle == nullptr) throw InputError("null handle");
    return handle;
}

std::string resolve_out_dir(const RunConfig& cfg, const char* out_dir) {
    if (out_dir != nullptr && *out_dir != '\0') return out_dir;
    if (const char* env = std::getenv("HEATRL_OUTPUT_DIR"); env != nullptr && *env != '\0')
        return env;
    return cfg.output_dir;
}

double require_finite(double value, const char* what) {
    if (!std::isfinite(value)) throw NumericError(std::string(what) + " is not finite");
    return value;
}

EpisodeEngine::Options case_options(CaseId id) {
    switch (id) {
        case CaseId::RB:
        case CaseId::DRL_NOFLEX:
            return {false, false};
        case CaseId::DRL_FLEX:
            return {true, false};
        case CaseId::DRL_FLEX_RASF:
            return {true, true};
    }
    throw ContractError("unhandled case id");
}

BauProfile make_bau(const RunConfig& cfg, const Scenario& scenario) {
    if (cfg.bau_source == BauSource::Rb) {
        RbController rb(cfg.plant.band);
        return project_bau(scenario, rb, cfg.plant, "rb");
    }
    if (cfg.checkpoints.noflex.empty())
        throw ConfigError("no checkpoint configured for the BAU reference policy");
    DdpgAgent noflex = DdpgAgent::load_checkpoint(cfg.checkpoints.noflex);
    DdpgController ctrl(noflex, 0.0);
    return project_bau(scenario, ctrl, cfg.plant, "drl-noflex");
}

}  // namespace

extern "C" {

const char* heatrl_version(void) { return HEATRL_VERSION; }

const char* heatrl_last_error(void) { return t_last_error.c_str(); }

heatrl_status heatrl_generate(const char* config_path, const char* out_dir) {
    return guarded([&] {
        const RunConfig cfg = RunConfig::from_file(require(config_path, "config_path"));
        run_generate(cfg, resolve_out_dir(cfg, out_dir));
    });
}

heatrl_status heatrl_train(const char* config_path, long episodes, long long seed,
                           const char* out_dir) {
    return guarded([&] {
        const RunConfig cfg = RunConfig::from_file(require(config_path, "config_path"));
        run_train(cfg, episodes, seed, resolve_out_dir(cfg, out_dir));
    });
}

heatrl_status heatrl_bau(const char* config_path, const char* checkpoint_path,
                         const char* scenario_csv, const char* out_dir) {
    return guarded([&] {
        const RunConfig cfg = RunConfig::from_file(require(config_path, "config_path"));
        run_bau(cfg, optional_arg(checkpoint_path), optional_arg(scenario_csv),
                resolve_out_dir(cfg, out_dir));
    });
}

heatrl_status heatrl_evaluate(const char* config_path, const char* checkpoint_path,
                              const char* scenario_csv, const char* case_name,
                              const char* out_dir) {
    return guarded([&] {
        const RunConfig cfg = RunConfig::from_file(require(config_path, "config_path"));
        const std::string name =
            case_name != nullptr && *case_name != '\0' ? case_name : cfg.eval_case;
        run_evaluate(cfg, optional_arg(checkpoint_path), optional_arg(scenario_csv), name,
                     resolve_out_dir(cfg, out_dir));
    });
}

heatrl_status heatrl_compare(const char* config_path, const char* out_dir) {
    return guarded([&] {
        const RunConfig cfg = RunConfig::from_file(require(config_path, "config_path"));
        run_compare(cfg, resolve_out_dir(cfg, out_dir));
    });
}

heatrl_status heatrl_simulate(const char* config_path, const char* case_name,
                              const char* out_dir) {
    return guarded([&] {
        const RunConfig cfg = RunConfig::from_file(require(config_path, "config_path"));
        const std::string name =
            case_name != nullptr && *case_name != '\0' ? case_name : cfg.eval_case;
        run_simulate(cfg, name, resolve_out_dir(cfg, out_dir));
    });
}

heatrl_status heatrl_agent_load(const char* checkpoint_path, heatrl_agent** out) {
    return guarded([&] {
        if (out == nullptr) throw InputError("out is null");
        *out = nullptr;
        auto agent = std::make_unique<heatrl_agent>(
            heatrl_agent{DdpgAgent::load_checkpoint(require(checkpoint_path, "checkpoint_path"))});
        *out = agent.release();
    });
}

heatrl_status heatrl_agent_save(const heatrl_agent* agent, const char* path) {
    return guarded([&] {
        require_handle(agent)->impl.save_checkpoint(require(path, "path"));
    });
}

heatrl_status heatrl_agent_observation_size(const heatrl_agent* agent, size_t* out) {
    return guarded([&] {
        const heatrl_agent* a = require_handle(agent);
        if (out == nullptr) throw InputError("out is null");
        *out = static_cast<size_t>(a->impl.observation_size());
    });
}

heatrl_status heatrl_agent_act(const heatrl_agent* agent, const double* obs,
                               size_t obs_len, double* u_out) {
    return guarded([&] {
        const heatrl_agent* a = require_handle(agent);
        if (obs == nullptr) throw InputError("obs is null");
        if (u_out == nullptr) throw InputError("u_out is null");
        const auto want = static_cast<size_t>(a->impl.observation_size());
        if (obs_len != want)
            throw InputError("observation length " + std::to_string(obs_len) +
                             " does not match the agent's observation size " +
                             std::to_string(want));
        if (want > static_cast<size_t>(kObservationSize))
            throw InputError("agent observation size exceeds HEATRL_OBS_SIZE");
        AgentObservation padded{};
        for (size_t i = 0; i < obs_len; ++i)
            padded[i] = require_finite(obs[i], "observation value");
        *u_out = a->impl.policy(padded);
    });
}

void heatrl_agent_destroy(heatrl_agent* agent) { delete agent; }

heatrl_status heatrl_env_create(const char* config_path, const char* case_name,
                                heatrl_env** out) {
    return guarded([&] {
        if (out == nullptr) throw InputError("out is null");
        *out = nullptr;
        const RunConfig cfg = RunConfig::from_file(require(config_path, "config_path"));
        const std::optional<CaseId> id =
            case_from_string(require(case_name, "case_name"));
        if (!id) throw ConfigError("unknown case '" + std::string(case_name) + "'");

        auto env = std::make_unique<heatrl_env>();
        env->cfg = cfg;
        env->scenario = resolve_scenario(cfg);
        const bool windowed = !env->scenario.requests.empty();
        if (windowed) env->bau = make_bau(cfg, env->scenario);
        env->engine = std::make_unique<EpisodeEngine>(
            env->scenario, cfg.plant, cfg.reward, cfg.filter,
            windowed ? &env->bau : nullptr, case_options(*id));
        *out = env.release();
    });
}

heatrl_status heatrl_env_observe(const heatrl_env* env, double* obs_out, size_t obs_len) {
    return guarded([&] {
        const heatrl_env* e = require_handle(env);
        if (obs_out == nullptr) throw InputError("obs_out is null");
        if (obs_len != static_cast<size_t>(kObservationSize))
            throw InputError("obs_len must be " + std::to_string(kObservationSize));
        const AgentObservation obs = e->engine->observation();
        std::copy(obs.begin(), obs.end(), obs_out);
    });
}

heatrl_status heatrl_env_step(heatrl_env* env, double u_proposed, double* reward_out,
                              double* u_safe_out, int* done_out) {
    return guarded([&] {
        heatrl_env* e = require_handle(env);
        const EpisodeEngine::Outcome outcome = e->engine->step(u_proposed);
        if (reward_out != nullptr) *reward_out = outcome.record.reward;
        if (u_safe_out != nullptr) *u_safe_out = outcome.record.u_safe;
        if (done_out != nullptr) *done_out = outcome.terminal ? 1 : 0;
    });
}

heatrl_status heatrl_env_room_temperature(const heatrl_env* env, double* t_room_c_out) {
    return guarded([&] {
        const heatrl_env* e = require_handle(env);
        if (t_room_c_out == nullptr) throw InputError("t_room_c_out is null");
        *t_room_c_out = e->engine->state().t_room_c;
    });
}

heatrl_status heatrl_env_reward_sum(const heatrl_env* env, double* out) {
    return guarded([&] {
        const heatrl_env* e = require_handle(env);
        if (out == nullptr) throw InputError("out is null");
        *out = e->engine->reward_sum();
    });
}

heatrl_status heatrl_env_steps(const heatrl_env* env, int* total_out, int* current_out) {
    return guarded([&] {
        const heatrl_env* e = require_handle(env);
        if (total_out != nullptr) *total_out = e->scenario.grid.n_steps;
        if (current_out != nullptr) *current_out = e->engine->state().t;
    });
}

void heatrl_env_destroy(heatrl_env* env) { delete env; }

heatrl_status heatrl_filter_create(const char* config_path, heatrl_filter** out) {
    return guarded([&] {
        if (out == nullptr) throw InputError("out is null");
        *out = nullptr;
        const RunConfig cfg = RunConfig::from_file(require(config_path, "config_path"));
        const double dt_hours = cfg.scenario.gen.step_minutes / 60.0;
        auto filter = std::make_unique<heatrl_filter>(
            heatrl_filter{SafetyFilter(cfg.filter, cfg.plant.thermal, dt_hours)});
        *out = filter.release();
    });
}

heatrl_status heatrl_filter_open_window(heatrl_filter* filter, int duration_steps,
                                        double phi, double e_bau_window_kwh) {
    return guarded([&] {
        heatrl_filter* f = require_handle(filter);
        if (duration_steps < 1) throw InputError("duration_steps must be at least 1");
        require_finite(phi, "phi");
        require_finite(e_bau_window_kwh, "e_bau_window_kwh");
        const FlexibilityRequest request{0, duration_steps, phi, 0};
        f->impl.open_window(request, e_bau_window_kwh);
    });
}

heatrl_status heatrl_filter_close_window(heatrl_filter* filter) {
    return guarded([&] { require_handle(filter)->impl.close_window(); });
}

heatrl_status heatrl_filter_active(const heatrl_filter* filter, int* active_out) {
    return guarded([&] {
        const heatrl_filter* f = require_handle(filter);
        if (active_out == nullptr) throw InputError("active_out is null");
        *active_out = f->impl.window_active() ? 1 : 0;
    });
}

heatrl_status heatrl_filter_apply(const heatrl_filter* filter, double u_proposed,
                                  double t_room_norm, double price_norm,
                                  double* u_safe_out, double* u_min_out,
                                  double* u_max_out, double* tau_out) {
    return guarded([&] {
        const heatrl_filter* f = require_handle(filter);
        const double u = std::clamp(require_finite(u_proposed, "u_proposed"), 0.0, 1.0);
        const double tn = std::clamp(require_finite(t_room_norm, "t_room_norm"), 0.0, 1.0);
        const double pn = std::clamp(require_finite(price_norm, "price_norm"), 0.0, 1.0);
        const FilterDecision d = f->impl.apply(u, tn, pn);
        if (u_safe_out != nullptr) *u_safe_out = d.u_safe;
        if (u_min_out != nullptr) *u_min_out = d.u_min;
        if (u_max_out != nullptr) *u_max_out = d.u_max;
        if (tau_out != nullptr) *tau_out = d.tau;
    });
}

heatrl_status heatrl_filter_advance(heatrl_filter* filter, double u_applied) {
    return guarded([&] {
        heatrl_filter* f = require_handle(filter);
        f->impl.advance(std::clamp(require_finite(u_applied, "u_applied"), 0.0, 1.0));
    });
}

void heatrl_filter_destroy(heatrl_filter* filter) { delete filter; }

}  // extern "C"
