#ifndef HEATRL_H
#define HEATRL_H

/* C API for the heating-control toolkit. Every entry point returns a
 * status code; on failure heatrl_last_error() carries a diagnostic for
 * the calling thread. No exceptions cross this boundary. */

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum heatrl_status {
    HEATRL_OK = 0,
    HEATRL_E_CONFIG = 1,   /* invalid or inconsistent configuration */
    HEATRL_E_PARSE = 2,    /* malformed config/CSV/checkpoint content */
    HEATRL_E_IO = 3,       /* file missing or unwritable */
    HEATRL_E_INPUT = 4,    /* argument outside the documented domain */
    HEATRL_E_NUMERIC = 5,  /* non-finite value where finite is required */
    HEATRL_E_TRAINING = 6, /* training diverged; artifacts are still saved */
    HEATRL_E_CONTRACT = 7, /* call sequence violated a handle's protocol */
    HEATRL_E_INTERNAL = 8
} heatrl_status;

#define HEATRL_OBS_SIZE 16

const char* heatrl_version(void);

/* Message for the most recent failure on this thread; "" after success. */
const char* heatrl_last_error(void);

/* ---------------------------------------------------------------------
 * Whole-run operations. config_path is required. out_dir may be NULL or
 * "": the output directory then falls back to $HEATRL_OUTPUT_DIR and
 * finally to the config's output_dir. Each call writes its artifacts
 * plus effective_config.json into the resolved directory.
 * ------------------------------------------------------------------- */

heatrl_status heatrl_generate(const char* config_path, const char* out_dir);

/* episodes < 0 or seed < 0 keep the config values. episodes == 0 still
 * writes a valid (untrained) checkpoint. */
heatrl_status heatrl_train(const char* config_path, long episodes, long long seed,
                           const char* out_dir);

/* Projects the reference consumption of a frozen checkpoint over the
 * scenario. checkpoint_path/scenario_csv may be NULL or "" to use the
 * config's checkpoint and scenario. */
heatrl_status heatrl_bau(const char* config_path, const char* checkpoint_path,
                         const char* scenario_csv, const char* out_dir);

/* case_name: RB, DRL_NOFLEX, DRL_FLEX, or DRL_FLEX_RASF. */
heatrl_status heatrl_evaluate(const char* config_path, const char* checkpoint_path,
                              const char* scenario_csv, const char* case_name,
                              const char* out_dir);

heatrl_status heatrl_compare(const char* config_path, const char* out_dir);

heatrl_status heatrl_simulate(const char* config_path, const char* case_name,
                              const char* out_dir);

/* ---------------------------------------------------------------------
 * Agent handle: a frozen policy loaded from a checkpoint.
 * ------------------------------------------------------------------- */

typedef struct heatrl_agent heatrl_agent;

heatrl_status heatrl_agent_load(const char* checkpoint_path, heatrl_agent** out);
heatrl_status heatrl_agent_save(const heatrl_agent* agent, const char* path);
heatrl_status heatrl_agent_observation_size(const heatrl_agent* agent, size_t* out);

/* Deterministic action in [0, 1]. obs_len must equal the agent's
 * observation size. */
heatrl_status heatrl_agent_act(const heatrl_agent* agent, const double* obs,
                               size_t obs_len, double* u_out);

void heatrl_agent_destroy(heatrl_agent* agent);

/* ---------------------------------------------------------------------
 * Environment handle: one episode over the configured scenario, wired
 * for one comparison case (window visibility and safety filtering);
 * the caller supplies the action each step.
 * ------------------------------------------------------------------- */

typedef struct heatrl_env heatrl_env;

heatrl_status heatrl_env_create(const char* config_path, const char* case_name,
                                heatrl_env** out);

/* obs_len must be HEATRL_OBS_SIZE. */
heatrl_status heatrl_env_observe(const heatrl_env* env, double* obs_out, size_t obs_len);

/* Advances one step. Output pointers may be NULL. done_out is 1 after
 * the final step; stepping past it is a contract error. */
heatrl_status heatrl_env_step(heatrl_env* env, double u_proposed, double* reward_out,
                              double* u_safe_out, int* done_out);

heatrl_status heatrl_env_room_temperature(const heatrl_env* env, double* t_room_c_out);
heatrl_status heatrl_env_reward_sum(const heatrl_env* env, double* out);
heatrl_status heatrl_env_steps(const heatrl_env* env, int* total_out, int* current_out);

void heatrl_env_destroy(heatrl_env* env);

/* ---------------------------------------------------------------------
 * Filter handle: the adaptive safety filter alone, for embedding in an
 * external control loop. Plant parameters and step length come from the
 * config. Normalized inputs are clamped to [0, 1].
 * ------------------------------------------------------------------- */

typedef struct heatrl_filter heatrl_filter;

heatrl_status heatrl_filter_create(const char* config_path, heatrl_filter** out);

heatrl_status heatrl_filter_open_window(heatrl_filter* filter, int duration_steps,
                                        double phi, double e_bau_window_kwh);
heatrl_status heatrl_filter_close_window(heatrl_filter* filter);
heatrl_status heatrl_filter_active(const heatrl_filter* filter, int* active_out);

/* Output pointers may be NULL. Outside a window u_safe echoes the
 * clamped proposal with bounds [0, 1]. */
heatrl_status heatrl_filter_apply(const heatrl_filter* filter, double u_proposed,
                                  double t_room_norm, double price_norm,
                                  double* u_safe_out, double* u_min_out,
                                  double* u_max_out, double* tau_out);

/* Books the applied action against the window budget. */
heatrl_status heatrl_filter_advance(heatrl_filter* filter, double u_applied);

void heatrl_filter_destroy(heatrl_filter* filter);

#ifdef __cplusplus
}
#endif

#endif /* HEATRL_H */
