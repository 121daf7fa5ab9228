#include "heatrl/config.hpp"

#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>

#include "heatrl/errors.hpp"
#include "json.hpp"

namespace heatrl {

namespace {

using nlohmann::json;

void check_keys(const json& j, const std::string& section,
                std::initializer_list<const char*> allowed) {
    if (!j.is_object())
        throw ParseError("config: section '" + section + "' must be an object");
    for (const auto& item : j.items()) {
        bool known = false;
        for (const char* key : allowed)
            if (item.key() == key) {
                known = true;
                break;
            }
        if (!known)
            throw ParseError("config: unknown key '" + item.key() + "' in section '" +
                             section + "'");
    }
}

template <typename T>
void read(const json& j, const char* key, T& field) {
    if (j.contains(key)) j.at(key).get_to(field);
}

// Section parsers tag messages with a generic "config:" prefix; replace it
// with the actual file name once known.
std::string with_origin(const char* what, const std::string& origin) {
    std::string msg = what;
    if (msg.rfind("config:", 0) == 0) return origin + ":" + msg.substr(7);
    return msg;
}

void parse_scenario(const json& j, RunConfig::ScenarioSection& s) {
    check_keys(j, "scenario",
               {"path", "seed", "start", "n_days", "step_minutes", "t_amb_mean_c",
                "t_amb_daily_amplitude_k", "t_amb_day_offset_std_k", "solar_peak_wm2",
                "solar_clearness_min", "solar_rise_minute", "solar_set_minute", "t_neigh_c",
                "price_day_chf", "price_night_chf", "price_noise_chf", "price_day_start_hour",
                "price_day_end_hour"});
    read(j, "path", s.path);
    read(j, "seed", s.seed);
    read(j, "start", s.gen.start_timestamp);
    read(j, "n_days", s.gen.n_days);
    read(j, "step_minutes", s.gen.step_minutes);
    read(j, "t_amb_mean_c", s.gen.t_amb_mean_c);
    read(j, "t_amb_daily_amplitude_k", s.gen.t_amb_daily_amplitude_k);
    read(j, "t_amb_day_offset_std_k", s.gen.t_amb_day_offset_std_k);
    read(j, "solar_peak_wm2", s.gen.solar_peak_wm2);
    read(j, "solar_clearness_min", s.gen.solar_clearness_min);
    read(j, "solar_rise_minute", s.gen.solar_rise_minute);
    read(j, "solar_set_minute", s.gen.solar_set_minute);
    read(j, "t_neigh_c", s.gen.t_neigh_c);
    read(j, "price_day_chf", s.gen.price_day_chf);
    read(j, "price_night_chf", s.gen.price_night_chf);
    read(j, "price_noise_chf", s.gen.price_noise_chf);
    read(j, "price_day_start_hour", s.gen.price_day_start_hour);
    read(j, "price_day_end_hour", s.gen.price_day_end_hour);
}

void parse_requests(const json& j, RunConfig::RequestSection& r) {
    check_keys(j, "requests",
               {"enabled", "seed", "phi_low", "phi_high", "max_hours", "announce_hour"});
    read(j, "enabled", r.enabled);
    read(j, "seed", r.seed);
    read(j, "phi_low", r.gen.phi_low);
    read(j, "phi_high", r.gen.phi_high);
    read(j, "max_hours", r.gen.max_hours);
    read(j, "announce_hour", r.gen.announce_hour);
}

void parse_thermal(const json& j, PlantConfig& plant) {
    check_keys(j, "thermal",
               {"capacitance_kwh_per_k", "resistance_ambient_k_per_kw",
                "resistance_neighbor_k_per_kw", "solar_gain_kw_per_wm2", "rated_power_kw",
                "efficiency", "mode_sign", "t_room_initial_c"});
    read(j, "capacitance_kwh_per_k", plant.thermal.capacitance_kwh_per_k);
    read(j, "resistance_ambient_k_per_kw", plant.thermal.resistance_ambient_k_per_kw);
    read(j, "resistance_neighbor_k_per_kw", plant.thermal.resistance_neighbor_k_per_kw);
    read(j, "solar_gain_kw_per_wm2", plant.thermal.solar_gain_kw_per_wm2);
    read(j, "rated_power_kw", plant.thermal.rated_power_kw);
    read(j, "efficiency", plant.thermal.efficiency);
    read(j, "mode_sign", plant.thermal.mode_sign);
    read(j, "t_room_initial_c", plant.t_room_initial_c);
}

void parse_band(const json& j, ComfortBand& band) {
    check_keys(j, "band", {"t_min", "t_max"});
    read(j, "t_min", band.t_min);
    read(j, "t_max", band.t_max);
}

void parse_reward(const json& j, RewardConfig& r) {
    check_keys(j, "reward", {"beta", "delta", "alpha1", "alpha2", "gamma", "price_normalized"});
    read(j, "beta", r.beta);
    read(j, "delta", r.delta);
    read(j, "alpha1", r.alpha1);
    read(j, "alpha2", r.alpha2);
    read(j, "gamma", r.gamma);
    read(j, "price_normalized", r.price_normalized);
}

void parse_ddpg(const json& j, DdpgConfig& d, std::uint64_t& seed) {
    check_keys(j, "ddpg",
               {"seed", "actor_lr", "critic_lr", "tau_soft", "batch_size", "buffer_capacity",
                "noise_sigma_initial", "noise_sigma_final", "hidden_sizes",
                "use_target_networks", "actor_final_init"});
    read(j, "seed", seed);
    read(j, "actor_lr", d.actor_lr);
    read(j, "critic_lr", d.critic_lr);
    read(j, "tau_soft", d.tau_soft);
    read(j, "batch_size", d.batch_size);
    read(j, "buffer_capacity", d.buffer_capacity);
    read(j, "noise_sigma_initial", d.noise_sigma_initial);
    read(j, "noise_sigma_final", d.noise_sigma_final);
    read(j, "hidden_sizes", d.hidden_sizes);
    read(j, "use_target_networks", d.use_target_networks);
    read(j, "actor_final_init", d.actor_final_init);
}

void parse_filter(const json& j, FilterConfig& f) {
    check_keys(j, "filter", {"w1", "exponent", "tau0", "terminal_pin_steps"});
    read(j, "w1", f.w1);
    read(j, "exponent", f.exponent);
    read(j, "tau0", f.tau0);
    read(j, "terminal_pin_steps", f.terminal_pin_steps);
}

void parse_train(const json& j, RunConfig::TrainSection& t) {
    check_keys(j, "train",
               {"episodes", "include_requests", "n_scenarios", "moving_window", "early_stop",
                "early_stop_min_episodes", "early_stop_margin", "checkpoint_every",
                "out_name"});
    read(j, "episodes", t.cfg.episodes);
    read(j, "include_requests", t.cfg.include_requests);
    read(j, "n_scenarios", t.n_scenarios);
    read(j, "moving_window", t.cfg.moving_window);
    read(j, "early_stop", t.cfg.early_stop);
    read(j, "early_stop_min_episodes", t.cfg.early_stop_min_episodes);
    read(j, "early_stop_margin", t.cfg.early_stop_margin);
    read(j, "checkpoint_every", t.cfg.checkpoint_every);
    read(j, "out_name", t.out_name);
}

void parse_checkpoints(const json& j, RunConfig::CheckpointSection& c) {
    check_keys(j, "checkpoints", {"noflex", "flex"});
    read(j, "noflex", c.noflex);
    read(j, "flex", c.flex);
}

}  // namespace

const char* to_string(BauSource source) {
    return source == BauSource::Rb ? "rb" : "drl-noflex";
}

RunConfig RunConfig::from_json_text(const std::string& text, const std::string& origin) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ParseError(origin + ": " + e.what());
    }

    RunConfig cfg;
    try {
        check_keys(j, "<root>",
                   {"output_dir", "scenario", "requests", "thermal", "band", "reward", "ddpg",
                    "filter", "train", "checkpoints", "bau_source", "case"});
        read(j, "output_dir", cfg.output_dir);
        if (j.contains("scenario")) parse_scenario(j["scenario"], cfg.scenario);
        if (j.contains("requests")) parse_requests(j["requests"], cfg.requests);
        if (j.contains("thermal")) parse_thermal(j["thermal"], cfg.plant);
        if (j.contains("band")) parse_band(j["band"], cfg.plant.band);
        if (j.contains("reward")) parse_reward(j["reward"], cfg.reward);
        if (j.contains("ddpg")) parse_ddpg(j["ddpg"], cfg.ddpg, cfg.ddpg_seed);
        if (j.contains("filter")) parse_filter(j["filter"], cfg.filter);
        if (j.contains("train")) parse_train(j["train"], cfg.train);
        if (j.contains("checkpoints")) parse_checkpoints(j["checkpoints"], cfg.checkpoints);
        if (j.contains("bau_source")) {
            const std::string s = j["bau_source"].get<std::string>();
            if (s == "rb")
                cfg.bau_source = BauSource::Rb;
            else if (s == "drl-noflex")
                cfg.bau_source = BauSource::DrlNoflex;
            else
                throw ConfigError("config: bau_source must be 'rb' or 'drl-noflex', got '" +
                                  s + "'");
        }
        read(j, "case", cfg.eval_case);
    } catch (const json::exception& e) {
        throw ParseError(origin + ": " + e.what());
    } catch (const ParseError& e) {
        throw ParseError(with_origin(e.what(), origin));
    } catch (const ConfigError& e) {
        throw ConfigError(with_origin(e.what(), origin));
    }

    // observation range and filter normalization track the comfort band
    cfg.plant.norms.t_room = NormSpec{cfg.plant.band.t_min, cfg.plant.band.t_max};
    cfg.filter.t_room_spec = cfg.plant.norms.t_room;
    cfg.filter.price_spec = cfg.plant.norms.price;
    cfg.ddpg.gamma = cfg.reward.gamma;

    if (!cfg.scenario.gen.valid()) throw ConfigError(origin + ": invalid scenario section");
    if (!cfg.requests.gen.valid()) throw ConfigError(origin + ": invalid requests section");
    if (!cfg.plant.valid()) throw ConfigError(origin + ": invalid thermal/band section");
    if (!cfg.reward.valid()) throw ConfigError(origin + ": invalid reward section");
    if (!cfg.ddpg.valid()) throw ConfigError(origin + ": invalid ddpg section");
    if (!cfg.filter.valid()) throw ConfigError(origin + ": invalid filter section");
    if (!cfg.train.cfg.valid() || cfg.train.n_scenarios < 1 || cfg.train.out_name.empty())
        throw ConfigError(origin + ": invalid train section");
    if (!case_from_string(cfg.eval_case))
        throw ConfigError(origin + ": unknown case '" + cfg.eval_case + "'");
    return cfg;
}

RunConfig RunConfig::from_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw IoError("cannot open config file: " + path);
    std::stringstream ss;
    ss << is.rdbuf();
    return from_json_text(ss.str(), path);
}

std::string RunConfig::to_json_text() const {
    json j;
    j["output_dir"] = output_dir;
    j["scenario"] = {{"path", scenario.path},
                     {"seed", scenario.seed},
                     {"start", scenario.gen.start_timestamp},
                     {"n_days", scenario.gen.n_days},
                     {"step_minutes", scenario.gen.step_minutes},
                     {"t_amb_mean_c", scenario.gen.t_amb_mean_c},
                     {"t_amb_daily_amplitude_k", scenario.gen.t_amb_daily_amplitude_k},
                     {"t_amb_day_offset_std_k", scenario.gen.t_amb_day_offset_std_k},
                     {"solar_peak_wm2", scenario.gen.solar_peak_wm2},
                     {"solar_clearness_min", scenario.gen.solar_clearness_min},
                     {"solar_rise_minute", scenario.gen.solar_rise_minute},
                     {"solar_set_minute", scenario.gen.solar_set_minute},
                     {"t_neigh_c", scenario.gen.t_neigh_c},
                     {"price_day_chf", scenario.gen.price_day_chf},
                     {"price_night_chf", scenario.gen.price_night_chf},
                     {"price_noise_chf", scenario.gen.price_noise_chf},
                     {"price_day_start_hour", scenario.gen.price_day_start_hour},
                     {"price_day_end_hour", scenario.gen.price_day_end_hour}};
    j["requests"] = {{"enabled", requests.enabled},
                     {"seed", requests.seed},
                     {"phi_low", requests.gen.phi_low},
                     {"phi_high", requests.gen.phi_high},
                     {"max_hours", requests.gen.max_hours},
                     {"announce_hour", requests.gen.announce_hour}};
    j["thermal"] = {{"capacitance_kwh_per_k", plant.thermal.capacitance_kwh_per_k},
                    {"resistance_ambient_k_per_kw", plant.thermal.resistance_ambient_k_per_kw},
                    {"resistance_neighbor_k_per_kw", plant.thermal.resistance_neighbor_k_per_kw},
                    {"solar_gain_kw_per_wm2", plant.thermal.solar_gain_kw_per_wm2},
                    {"rated_power_kw", plant.thermal.rated_power_kw},
                    {"efficiency", plant.thermal.efficiency},
                    {"mode_sign", plant.thermal.mode_sign},
                    {"t_room_initial_c", plant.t_room_initial_c}};
    j["band"] = {{"t_min", plant.band.t_min}, {"t_max", plant.band.t_max}};
    j["reward"] = {{"beta", reward.beta},
                   {"delta", reward.delta},
                   {"alpha1", reward.alpha1},
                   {"alpha2", reward.alpha2},
                   {"gamma", reward.gamma},
                   {"price_normalized", reward.price_normalized}};
    j["ddpg"] = {{"seed", ddpg_seed},
                 {"actor_lr", ddpg.actor_lr},
                 {"critic_lr", ddpg.critic_lr},
                 {"tau_soft", ddpg.tau_soft},
                 {"batch_size", ddpg.batch_size},
                 {"buffer_capacity", ddpg.buffer_capacity},
                 {"noise_sigma_initial", ddpg.noise_sigma_initial},
                 {"noise_sigma_final", ddpg.noise_sigma_final},
                 {"hidden_sizes", ddpg.hidden_sizes},
                 {"use_target_networks", ddpg.use_target_networks},
                 {"actor_final_init", ddpg.actor_final_init}};
    j["filter"] = {{"w1", filter.w1},
                   {"exponent", filter.exponent},
                   {"tau0", filter.tau0},
                   {"terminal_pin_steps", filter.terminal_pin_steps}};
    j["train"] = {{"episodes", train.cfg.episodes},
                  {"include_requests", train.cfg.include_requests},
                  {"n_scenarios", train.n_scenarios},
                  {"moving_window", train.cfg.moving_window},
                  {"early_stop", train.cfg.early_stop},
                  {"early_stop_min_episodes", train.cfg.early_stop_min_episodes},
                  {"early_stop_margin", train.cfg.early_stop_margin},
                  {"checkpoint_every", train.cfg.checkpoint_every},
                  {"out_name", train.out_name}};
    j["checkpoints"] = {{"noflex", checkpoints.noflex}, {"flex", checkpoints.flex}};
    j["bau_source"] = to_string(bau_source);
    j["case"] = eval_case;
    return j.dump(2) + "\n";
}

}  // namespace heatrl
