#include "heatrl/scenario.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "csv_line.hpp"
#include "heatrl/errors.hpp"

namespace heatrl {

namespace {

constexpr double kPi = 3.14159265358979323846;

}  // namespace

Scenario generate_scenario(const ScenarioGenConfig& cfg, std::uint64_t seed) {
    if (!cfg.valid()) throw ConfigError("scenario generator: invalid configuration");

    Scenario sc;
    sc.grid.start_minutes = parse_timestamp(cfg.start_timestamp);
    sc.grid.step_minutes = cfg.step_minutes;
    sc.grid.n_steps = cfg.n_days * (1440 / cfg.step_minutes);
    sc.rng_seed = seed;

    Rng rng(seed);
    std::vector<double> day_offset(cfg.n_days), clearness(cfg.n_days);
    for (int d = 0; d < cfg.n_days; ++d) {
        day_offset[d] = rng.normal(0.0, cfg.t_amb_day_offset_std_k);
        clearness[d] = rng.uniform(cfg.solar_clearness_min, 1.0);
    }

    sc.exogenous.resize(sc.grid.n_steps);
    const int steps_per_day = sc.grid.steps_per_day();
    for (int t = 0; t < sc.grid.n_steps; ++t) {
        const int d = t / steps_per_day;
        const int m = sc.grid.minute_of_day(t);
        ExogenousSample& ex = sc.exogenous[t];

        // coldest around 05:00, warmest around 17:00
        ex.t_amb_c = cfg.t_amb_mean_c + day_offset[d] -
                     cfg.t_amb_daily_amplitude_k * std::cos(2.0 * kPi * (m - 300) / 1440.0);

        if (m >= cfg.solar_rise_minute && m <= cfg.solar_set_minute) {
            const double frac = double(m - cfg.solar_rise_minute) /
                                (cfg.solar_set_minute - cfg.solar_rise_minute);
            ex.i_solar_wm2 = cfg.solar_peak_wm2 * clearness[d] * std::sin(kPi * frac);
        } else {
            ex.i_solar_wm2 = 0.0;
        }

        ex.t_neigh_c = cfg.t_neigh_c;

        const int hour = m / 60;
        const double base = (hour >= cfg.price_day_start_hour && hour < cfg.price_day_end_hour)
                                ? cfg.price_day_chf
                                : cfg.price_night_chf;
        ex.price_chf_per_kwh =
            std::max(base + rng.uniform(-cfg.price_noise_chf, cfg.price_noise_chf), 0.0);
    }
    return sc;
}

std::vector<FlexibilityRequest> generate_requests(const TimeGrid& grid,
                                                  const RequestGenConfig& cfg, Rng& rng) {
    if (!cfg.valid()) throw ConfigError("request generator: invalid configuration");
    if (!grid.spans_whole_days())
        throw InputError("request generator: grid must span whole days");

    const int spd = grid.steps_per_day();
    const int n_days = grid.n_steps / spd;
    const int announce_offset = cfg.announce_hour * 60 / grid.step_minutes;
    const int max_steps =
        std::max(1, static_cast<int>(cfg.max_hours * 60.0 / grid.step_minutes));

    std::vector<FlexibilityRequest> out;
    out.reserve(n_days);
    for (int d = 0; d < n_days; ++d) {
        const int base = d * spd;
        const int announce = base + announce_offset;
        const int day_end = base + spd;
        int duration = 1 + static_cast<int>(rng.integer(max_steps));
        if (duration > day_end - announce) duration = day_end - announce;
        const int latest = day_end - duration;
        const int t_start = announce + static_cast<int>(rng.integer(latest - announce + 1));
        FlexibilityRequest req;
        req.t_start = t_start;
        req.t_end = t_start + duration;
        req.phi = rng.uniform(cfg.phi_low, cfg.phi_high);
        req.announced_at = announce;
        validate_request(req, cfg.phi_low, cfg.phi_high, max_steps);
        out.push_back(req);
    }
    return out;
}

namespace {

const char* kHeader = "timestamp,t_amb_c,i_solar_wm2,t_neigh_c,price_chf_per_kwh";

}  // namespace

Scenario load_scenario(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw IoError("cannot open scenario file: " + path);

    std::string line;
    if (!std::getline(is, line)) throw ParseError(path + ": empty file");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != kHeader)
        throw ParseError(path + ": unexpected header '" + line + "' (expected '" + kHeader +
                         "')");

    Scenario sc;
    std::vector<std::int64_t> stamps;
    int row = 1;
    while (std::getline(is, line)) {
        ++row;
        if (line.empty() || line == "\r") continue;
        const auto fields = csv::split(line);
        if (fields.size() != 5)
            throw ParseError(path + ": row " + std::to_string(row) + ": expected 5 fields, got " +
                             std::to_string(fields.size()));
        std::int64_t stamp;
        try {
            stamp = parse_timestamp(fields[0]);
        } catch (const ParseError& e) {
            throw ParseError(path + ": row " + std::to_string(row) + ", column timestamp: " +
                             e.what());
        }
        stamps.push_back(stamp);
        ExogenousSample ex;
        ex.t_amb_c = csv::number(fields[1], path, row, "t_amb_c");
        ex.i_solar_wm2 = csv::number(fields[2], path, row, "i_solar_wm2");
        ex.t_neigh_c = csv::number(fields[3], path, row, "t_neigh_c");
        ex.price_chf_per_kwh = csv::number(fields[4], path, row, "price_chf_per_kwh");
        if (ex.i_solar_wm2 < 0.0)
            throw ParseError(path + ": row " + std::to_string(row) +
                             ", column i_solar_wm2: negative irradiance");
        if (ex.price_chf_per_kwh < 0.0)
            throw ParseError(path + ": row " + std::to_string(row) +
                             ", column price_chf_per_kwh: negative price");
        sc.exogenous.push_back(ex);
    }
    if (stamps.empty()) throw ParseError(path + ": no data rows");

    sc.grid.start_minutes = stamps[0];
    sc.grid.n_steps = static_cast<int>(stamps.size());
    if (stamps.size() >= 2) {
        const std::int64_t spacing = stamps[1] - stamps[0];
        if (spacing <= 0 || spacing > 1440)
            throw ParseError(path + ": row 3: non-increasing or oversized timestamp spacing");
        sc.grid.step_minutes = static_cast<int>(spacing);
        for (std::size_t i = 2; i < stamps.size(); ++i) {
            if (stamps[i] - stamps[i - 1] != spacing)
                throw ParseError(path + ": row " + std::to_string(i + 2) +
                                 ": non-uniform timestamp spacing");
        }
    }
    return sc;
}

void save_scenario(const Scenario& scenario, const std::string& path) {
    if (!scenario.valid()) throw InputError("save_scenario: inconsistent scenario");
    std::ofstream os(path, std::ios::trunc);
    if (!os) throw IoError("cannot write scenario file: " + path);
    os << kHeader << '\n';
    char buf[192];
    for (int t = 0; t < scenario.grid.n_steps; ++t) {
        const ExogenousSample& ex = scenario.exogenous[t];
        std::snprintf(buf, sizeof buf, "%s,%.17g,%.17g,%.17g,%.17g\n",
                      format_timestamp(scenario.grid.minutes_at(t)).c_str(), ex.t_amb_c,
                      ex.i_solar_wm2, ex.t_neigh_c, ex.price_chf_per_kwh);
        os << buf;
    }
    os.flush();
    if (!os) throw IoError("write failed: " + path);
}

}  // namespace heatrl
