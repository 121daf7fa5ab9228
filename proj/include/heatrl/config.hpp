#pragma once

#include <cstdint>
#include <string>

#include "heatrl/ddpg.hpp"
#include "heatrl/harness.hpp"
#include "heatrl/safety_filter.hpp"
#include "heatrl/scenario.hpp"
#include "heatrl/thermal.hpp"

namespace heatrl {

// Whole-run configuration, loaded from a single JSON file. Every key has a
// default; unknown keys are rejected so typos cannot silently fall back.
// Derived quantities (observation range for the room temperature, the
// filter's normalization specs) follow the comfort band and are not
// separate knobs.
struct RunConfig {
    std::string output_dir = "out";

    struct ScenarioSection {
        std::string path;  // CSV to load; empty -> synthesize from the generator
        std::uint64_t seed = 2021;
        ScenarioGenConfig gen;
    } scenario;

    struct RequestSection {
        bool enabled = true;
        std::uint64_t seed = 77;
        RequestGenConfig gen;
    } requests;

    PlantConfig plant;
    RewardConfig reward;
    DdpgConfig ddpg;
    std::uint64_t ddpg_seed = 1;
    FilterConfig filter;

    struct TrainSection {
        TrainConfig cfg;
        int n_scenarios = 10;  // training pool size, cycled per episode
        std::string out_name = "checkpoint.ckpt";
    } train;

    struct CheckpointSection {
        std::string noflex;
        std::string flex;
    } checkpoints;

    BauSource bau_source = BauSource::DrlNoflex;
    std::string eval_case = "DRL_FLEX_RASF";

    // Parses, validates, and resolves derived fields. Unknown keys anywhere
    // raise ParseError naming the section; invalid values raise ConfigError.
    static RunConfig from_json_text(const std::string& text, const std::string& origin);
    static RunConfig from_file(const std::string& path);

    // Fully-resolved echo of every accepted key, for the output directory.
    std::string to_json_text() const;
};

const char* to_string(BauSource source);

}  // namespace heatrl
