#include "doctest.h"

#include <filesystem>
#include <fstream>

#include "heatrl/config.hpp"
#include "heatrl/errors.hpp"

using namespace heatrl;

TEST_CASE("empty document yields the documented defaults") {
    const RunConfig cfg = RunConfig::from_json_text("{}", "inline");
    CHECK(cfg.output_dir == "out");
    CHECK(cfg.scenario.path.empty());
    CHECK(cfg.scenario.seed == 2021);
    CHECK(cfg.scenario.gen.n_days == 3);
    CHECK(cfg.scenario.gen.step_minutes == 15);
    CHECK(cfg.requests.enabled);
    CHECK(cfg.requests.gen.phi_low == doctest::Approx(0.7));
    CHECK(cfg.requests.gen.phi_high == doctest::Approx(1.3));
    CHECK(cfg.plant.thermal.rated_power_kw == doctest::Approx(2.0));
    CHECK(cfg.plant.band.t_min == doctest::Approx(23.5));
    CHECK(cfg.plant.band.t_max == doctest::Approx(25.0));
    CHECK(cfg.reward.beta == doctest::Approx(20.0));
    CHECK(cfg.reward.delta == doctest::Approx(0.8));
    CHECK(cfg.reward.alpha1 == doctest::Approx(1.0));
    CHECK(cfg.reward.alpha2 == doctest::Approx(10.0));
    CHECK(cfg.reward.gamma == doctest::Approx(0.99));
    CHECK(cfg.ddpg.batch_size == 64);
    CHECK(cfg.ddpg.hidden_sizes == std::vector<int>{64, 64});
    CHECK(cfg.ddpg_seed == 1);
    CHECK(cfg.filter.w1 == doctest::Approx(0.5));
    CHECK(cfg.train.cfg.episodes == 2000);
    CHECK(cfg.train.n_scenarios == 10);
    CHECK(cfg.train.out_name == "checkpoint.ckpt");
    CHECK(cfg.bau_source == BauSource::DrlNoflex);
    CHECK(cfg.eval_case == "DRL_FLEX_RASF");
}

TEST_CASE("unknown keys are rejected with section and key named") {
    const auto reject = [](const std::string& text, const char* key, const char* section) {
        try {
            RunConfig::from_json_text(text, "inline");
            FAIL("expected ParseError for ", key);
        } catch (const ParseError& e) {
            const std::string msg = e.what();
            CHECK(msg.find(key) != std::string::npos);
            CHECK(msg.find(section) != std::string::npos);
        }
    };
    reject(R"({"outut_dir": "x"})", "outut_dir", "root");
    reject(R"({"scenario": {"dayz": 2}})", "dayz", "scenario");
    reject(R"({"requests": {"phi": 1.0}})", "phi", "requests");
    reject(R"({"thermal": {"capacity": 2.0}})", "capacity", "thermal");
    reject(R"({"band": {"tmin": 21.0}})", "tmin", "band");
    reject(R"({"reward": {"betas": 20.0}})", "betas", "reward");
    reject(R"({"ddpg": {"lr": 1e-4}})", "lr", "ddpg");
    reject(R"({"filter": {"tau": 0.5}})", "tau", "filter");
    reject(R"({"train": {"episode": 5}})", "episode", "train");
    reject(R"({"checkpoints": {"no_flex": "a"}})", "no_flex", "checkpoints");
}

TEST_CASE("malformed json names the origin") {
    CHECK_THROWS_WITH_AS(RunConfig::from_json_text("{ nope", "conf.json"),
                         doctest::Contains("conf.json"), ParseError);
    CHECK_THROWS_WITH_AS(RunConfig::from_json_text(R"({"scenario": 3})", "conf.json"),
                         doctest::Contains("conf.json"), ParseError);
    // type mismatch inside a section
    CHECK_THROWS_AS(RunConfig::from_json_text(R"({"scenario": {"n_days": "three"}})",
                                              "conf.json"),
                    ParseError);
}

TEST_CASE("derived fields track the comfort band and reward discount") {
    const RunConfig cfg = RunConfig::from_json_text(
        R"({"band": {"t_min": 20.0, "t_max": 22.0}, "reward": {"gamma": 0.95}})",
        "inline");
    CHECK(cfg.plant.norms.t_room.raw_min == doctest::Approx(20.0));
    CHECK(cfg.plant.norms.t_room.raw_max == doctest::Approx(22.0));
    CHECK(cfg.filter.t_room_spec.raw_min == doctest::Approx(20.0));
    CHECK(cfg.filter.t_room_spec.raw_max == doctest::Approx(22.0));
    CHECK(cfg.filter.price_spec.raw_min == doctest::Approx(cfg.plant.norms.price.raw_min));
    CHECK(cfg.filter.price_spec.raw_max == doctest::Approx(cfg.plant.norms.price.raw_max));
    CHECK(cfg.ddpg.gamma == doctest::Approx(0.95));
}

TEST_CASE("bau source and case names are validated") {
    CHECK(RunConfig::from_json_text(R"({"bau_source": "rb"})", "inline").bau_source ==
          BauSource::Rb);
    CHECK(RunConfig::from_json_text(R"({"bau_source": "drl-noflex"})", "inline")
              .bau_source == BauSource::DrlNoflex);
    CHECK_THROWS_WITH_AS(RunConfig::from_json_text(R"({"bau_source": "oracle"})", "inline"),
                         doctest::Contains("oracle"), ConfigError);
    CHECK(RunConfig::from_json_text(R"({"case": "RB"})", "inline").eval_case == "RB");
    CHECK_THROWS_WITH_AS(RunConfig::from_json_text(R"({"case": "DRL"})", "inline"),
                         doctest::Contains("DRL"), ConfigError);
}

TEST_CASE("invalid values raise config errors naming the section") {
    const auto reject = [](const std::string& text, const char* section) {
        CHECK_THROWS_WITH_AS(RunConfig::from_json_text(text, "inline"),
                             doctest::Contains(section), ConfigError);
    };
    reject(R"({"scenario": {"n_days": 0}})", "scenario");
    reject(R"({"requests": {"phi_low": 1.4}})", "requests");
    reject(R"({"thermal": {"efficiency": 0.0}})", "thermal");
    reject(R"({"band": {"t_min": 25.0, "t_max": 23.0}})", "band");
    reject(R"({"ddpg": {"batch_size": 0}})", "ddpg");
    reject(R"({"train": {"episodes": -1}})", "train");
}

TEST_CASE("echo of the effective config is a fixed point") {
    const std::string text = R"({
        "output_dir": "results",
        "scenario": {"n_days": 7, "seed": 99, "t_amb_mean_c": 2.5},
        "requests": {"enabled": true, "seed": 13, "max_hours": 6.0},
        "band": {"t_min": 22.0, "t_max": 24.0},
        "reward": {"beta": 10.0, "gamma": 0.97},
        "ddpg": {"hidden_sizes": [32, 16], "actor_lr": 2e-4},
        "filter": {"w1": 0.6},
        "train": {"episodes": 500, "out_name": "flex.ckpt"},
        "checkpoints": {"noflex": "a.ckpt", "flex": "b.ckpt"},
        "bau_source": "rb",
        "case": "DRL_FLEX"
    })";
    const RunConfig cfg = RunConfig::from_json_text(text, "inline");
    const std::string echo = cfg.to_json_text();
    const RunConfig again = RunConfig::from_json_text(echo, "echo");
    CHECK(again.to_json_text() == echo);
    CHECK(again.output_dir == "results");
    CHECK(again.scenario.gen.n_days == 7);
    CHECK(again.scenario.gen.t_amb_mean_c == doctest::Approx(2.5));
    CHECK(again.requests.gen.max_hours == doctest::Approx(6.0));
    CHECK(again.ddpg.hidden_sizes == std::vector<int>{32, 16});
    CHECK(again.ddpg.actor_lr == doctest::Approx(2e-4));
    CHECK(again.train.cfg.episodes == 500);
    CHECK(again.train.out_name == "flex.ckpt");
    CHECK(again.checkpoints.flex == "b.ckpt");
    CHECK(again.bau_source == BauSource::Rb);
    CHECK(again.eval_case == "DRL_FLEX");
}

TEST_CASE("from_file reports missing and unreadable paths") {
    CHECK_THROWS_WITH_AS(RunConfig::from_file("/nonexistent/run.json"),
                         doctest::Contains("/nonexistent/run.json"), IoError);

    const auto path = std::filesystem::temp_directory_path() / "heatrl_cfg_roundtrip.json";
    {
        std::ofstream os(path, std::ios::trunc);
        os << R"({"scenario": {"n_days": 4}})";
    }
    const RunConfig cfg = RunConfig::from_file(path.string());
    CHECK(cfg.scenario.gen.n_days == 4);
    std::filesystem::remove(path);
}
