#include <cstdio>
#include <string>

#include "CLI11.hpp"
#include "heatrl/heatrl.h"

namespace {

const char* c_or_null(const std::string& s) { return s.empty() ? nullptr : s.c_str(); }

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"heating control toolkit: scenario generation, policy training, safety "
                 "filtering, and four-case comparison"};
    app.require_subcommand(1);
    app.set_version_flag("--version", heatrl_version());

    std::string config;
    std::string out;
    std::string checkpoint;
    std::string scenario;
    std::string case_name;
    long episodes = -1;
    long long seed = -1;

    const auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config, "run configuration JSON")->required();
        sub->add_option("--out", out,
                        "output directory (overrides HEATRL_OUTPUT_DIR and the config)");
    };

    CLI::App* generate = app.add_subcommand("generate", "synthesize a scenario CSV");
    add_common(generate);

    CLI::App* train =
        app.add_subcommand("train", "train a policy and write checkpoint + reward curve");
    add_common(train);
    train->add_option("--episodes", episodes, "episode count override");
    train->add_option("--seed", seed, "agent seed override");

    CLI::App* bau = app.add_subcommand(
        "bau", "project the reference consumption of a frozen policy");
    add_common(bau);
    bau->add_option("--checkpoint", checkpoint, "policy checkpoint");
    bau->add_option("--scenario", scenario, "scenario CSV override");

    CLI::App* evaluate =
        app.add_subcommand("evaluate", "run one case and emit its KPI report");
    add_common(evaluate);
    evaluate->add_option("--checkpoint", checkpoint, "policy checkpoint override");
    evaluate->add_option("--scenario", scenario, "scenario CSV override");
    evaluate->add_option("--case", case_name,
                         "RB, DRL_NOFLEX, DRL_FLEX, or DRL_FLEX_RASF");

    CLI::App* compare =
        app.add_subcommand("compare", "run all four cases on the identical scenario");
    add_common(compare);

    CLI::App* simulate =
        app.add_subcommand("simulate", "single-episode trajectory log for one case");
    add_common(simulate);
    simulate->add_option("--case", case_name, "case to simulate");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    heatrl_status status = HEATRL_OK;
    if (generate->parsed()) {
        status = heatrl_generate(config.c_str(), c_or_null(out));
    } else if (train->parsed()) {
        status = heatrl_train(config.c_str(), episodes, seed, c_or_null(out));
    } else if (bau->parsed()) {
        status = heatrl_bau(config.c_str(), c_or_null(checkpoint), c_or_null(scenario),
                            c_or_null(out));
    } else if (evaluate->parsed()) {
        status = heatrl_evaluate(config.c_str(), c_or_null(checkpoint),
                                 c_or_null(scenario), c_or_null(case_name), c_or_null(out));
    } else if (compare->parsed()) {
        status = heatrl_compare(config.c_str(), c_or_null(out));
    } else if (simulate->parsed()) {
        status = heatrl_simulate(config.c_str(), c_or_null(case_name), c_or_null(out));
    }

    if (status != HEATRL_OK) {
        std::fprintf(stderr, "error: %s\n", heatrl_last_error());
        return 1;
    }
    return 0;
}
