#include "heatrl/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "csv_line.hpp"
#include "heatrl/errors.hpp"
#include "json.hpp"

namespace heatrl {

namespace {

using nlohmann::json;

std::string g17(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string f2(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::ofstream open_out(const std::string& path) {
    std::ofstream os(path, std::ios::trunc);
    if (!os) throw IoError("cannot write file: " + path);
    return os;
}

std::ifstream open_in(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw IoError("cannot open file: " + path);
    return is;
}

void expect_header(const std::string& got, const char* want, const std::string& path) {
    std::string line = got;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != want)
        throw ParseError(path + ": unexpected header '" + line + "' (expected '" + want + "')");
}

}  // namespace

void write_trajectory_csv(const Trajectory& traj, const TimeGrid& grid,
                          const std::string& path) {
    std::ofstream os = open_out(path);
    os << kTrajectoryHeader << '\n';
    for (const StepRecord& r : traj.steps) {
        os << r.t << ',' << format_timestamp(grid.minutes_at(r.t)) << ',' << g17(r.t_room_c)
           << ',' << g17(r.t_amb_c) << ',' << g17(r.i_solar_wm2) << ','
           << g17(r.price_chf_per_kwh) << ',' << g17(r.u_proposed) << ',' << g17(r.u_safe)
           << ',' << g17(r.tau) << ',' << g17(r.u_min) << ',' << g17(r.u_max) << ','
           << (r.window_active ? 1 : 0) << ',' << (r.filter_active ? 1 : 0) << ','
           << g17(r.energy_kwh) << ',' << g17(r.cost_chf) << ',' << g17(r.reward) << ','
           << g17(r.comfort_violation_k) << '\n';
    }
    os.flush();
    if (!os) throw IoError("write failed: " + path);
}

Trajectory load_trajectory_csv(const std::string& path) {
    std::ifstream is = open_in(path);
    std::string line;
    if (!std::getline(is, line)) throw ParseError(path + ": empty file");
    expect_header(line, kTrajectoryHeader, path);

    Trajectory traj;
    std::vector<std::int64_t> stamps;
    int row = 1;
    while (std::getline(is, line)) {
        ++row;
        if (line.empty() || line == "\r") continue;
        const auto f = csv::split(line);
        if (f.size() != 17)
            throw ParseError(path + ": row " + std::to_string(row) + ": expected 17 fields, got " +
                             std::to_string(f.size()));
        StepRecord r;
        r.t = static_cast<int>(csv::integer(f[0], path, row, "t"));
        try {
            stamps.push_back(parse_timestamp(f[1]));
        } catch (const ParseError& e) {
            throw ParseError(path + ": row " + std::to_string(row) + ", column timestamp: " +
                             e.what());
        }
        r.t_room_c = csv::number(f[2], path, row, "t_room_c");
        r.t_amb_c = csv::number(f[3], path, row, "t_amb_c");
        r.i_solar_wm2 = csv::number(f[4], path, row, "i_solar_wm2");
        r.price_chf_per_kwh = csv::number(f[5], path, row, "price_chf_per_kwh");
        r.u_proposed = csv::number(f[6], path, row, "u_proposed");
        r.u_safe = csv::number(f[7], path, row, "u_safe");
        r.tau = csv::number(f[8], path, row, "tau");
        r.u_min = csv::number(f[9], path, row, "u_min");
        r.u_max = csv::number(f[10], path, row, "u_max");
        r.window_active = csv::flag(f[11], path, row, "window_active");
        r.filter_active = csv::flag(f[12], path, row, "filter_active");
        r.energy_kwh = csv::number(f[13], path, row, "energy_kwh");
        r.cost_chf = csv::number(f[14], path, row, "cost_chf");
        r.reward = csv::number(f[15], path, row, "reward");
        r.comfort_violation_k = csv::number(f[16], path, row, "comfort_violation_k");
        traj.steps.push_back(r);
        traj.reward_sum += r.reward;
    }
    if (stamps.size() >= 2) traj.dt_hours = double(stamps[1] - stamps[0]) / 60.0;
    return traj;
}

void write_reward_curve_csv(const std::vector<EpisodePoint>& curve, const std::string& path) {
    std::ofstream os = open_out(path);
    os << kCurveHeader << '\n';
    for (const EpisodePoint& p : curve) {
        os << p.episode << ',' << g17(p.reward_sum) << ',' << g17(p.reward_step_mean) << ','
           << g17(p.moving_mean) << ',' << g17(p.noise_sigma) << ',' << g17(p.rb_reward_sum)
           << ',' << g17(p.rb_moving_mean) << '\n';
    }
    os.flush();
    if (!os) throw IoError("write failed: " + path);
}

std::vector<EpisodePoint> load_reward_curve_csv(const std::string& path) {
    std::ifstream is = open_in(path);
    std::string line;
    if (!std::getline(is, line)) throw ParseError(path + ": empty file");
    expect_header(line, kCurveHeader, path);

    std::vector<EpisodePoint> curve;
    int row = 1;
    while (std::getline(is, line)) {
        ++row;
        if (line.empty() || line == "\r") continue;
        const auto f = csv::split(line);
        if (f.size() != 7)
            throw ParseError(path + ": row " + std::to_string(row) + ": expected 7 fields, got " +
                             std::to_string(f.size()));
        EpisodePoint p;
        p.episode = static_cast<int>(csv::integer(f[0], path, row, "episode"));
        p.reward_sum = csv::number(f[1], path, row, "reward_sum");
        p.reward_step_mean = csv::number(f[2], path, row, "reward_step_mean");
        p.moving_mean = csv::number(f[3], path, row, "moving_mean");
        p.noise_sigma = csv::number(f[4], path, row, "noise_sigma");
        p.rb_reward_sum = csv::number(f[5], path, row, "rb_reward_sum");
        p.rb_moving_mean = csv::number(f[6], path, row, "rb_moving_mean");
        curve.push_back(p);
    }
    return curve;
}

void write_bau_csv(const BauProfile& profile, const TimeGrid& grid, const std::string& path) {
    if (profile.energy_kwh.size() != static_cast<std::size_t>(grid.n_steps))
        throw InputError("bau csv: profile length does not match the grid");
    std::ofstream os = open_out(path);
    os << kBauHeader << '\n';
    for (int t = 0; t < grid.n_steps; ++t)
        os << format_timestamp(grid.minutes_at(t)) << ',' << g17(profile.energy_kwh[t]) << ','
           << profile.source << '\n';
    os.flush();
    if (!os) throw IoError("write failed: " + path);
}

BauProfile load_bau_csv(const std::string& path) {
    std::ifstream is = open_in(path);
    std::string line;
    if (!std::getline(is, line)) throw ParseError(path + ": empty file");
    expect_header(line, kBauHeader, path);

    BauProfile profile;
    int row = 1;
    while (std::getline(is, line)) {
        ++row;
        if (line.empty() || line == "\r") continue;
        const auto f = csv::split(line);
        if (f.size() != 3)
            throw ParseError(path + ": row " + std::to_string(row) + ": expected 3 fields, got " +
                             std::to_string(f.size()));
        const double energy = csv::number(f[1], path, row, "energy_kwh");
        if (energy < 0.0)
            throw ParseError(path + ": row " + std::to_string(row) +
                             ", column energy_kwh: negative energy");
        profile.energy_kwh.push_back(energy);
        profile.source = f[2];
    }
    return profile;
}

std::string kpi_report_json(const std::map<CaseId, KpiReport>& kpis,
                            const std::map<CaseId, Trajectory>& trajectories,
                            const std::string& bau_source) {
    json j;
    j["bau_source"] = bau_source;
    j["cases"] = json::object();
    for (const auto& [id, kpi] : kpis) {
        json c;
        c["comfort_violation_kh"] = kpi.comfort_violation_kh;
        c["energy_kwh"] = kpi.energy_kwh;
        c["cost_chf"] = kpi.cost_chf;
        c["flex_compliance_rate"] = kpi.flex_compliance_rate;
        c["n_windows"] = kpi.n_windows;
        c["n_compliant"] = kpi.n_compliant;
        c["reward_sum"] = kpi.reward_sum;
        c["windows"] = json::array();
        const auto traj = trajectories.find(id);
        if (traj != trajectories.end()) {
            for (const WindowOutcome& w : traj->second.windows) {
                c["windows"].push_back({{"t_start", w.request.t_start},
                                        {"t_end", w.request.t_end},
                                        {"phi", w.request.phi},
                                        {"e_bau_kwh", w.e_bau_kwh},
                                        {"budget_kwh", w.budget_kwh},
                                        {"consumed_kwh", w.consumed_kwh},
                                        {"compliant", w.compliant}});
            }
        }
        j["cases"][to_string(id)] = c;
    }
    return j.dump(2) + "\n";
}

void write_kpi_report(const std::map<CaseId, KpiReport>& kpis,
                      const std::map<CaseId, Trajectory>& trajectories,
                      const std::string& bau_source, const std::string& path) {
    std::ofstream os = open_out(path);
    os << kpi_report_json(kpis, trajectories, bau_source);
    os.flush();
    if (!os) throw IoError("write failed: " + path);
}

std::map<CaseId, KpiReport> load_kpi_report(const std::string& path) {
    std::ifstream is = open_in(path);
    json j;
    try {
        j = json::parse(is);
    } catch (const json::exception& e) {
        throw ParseError(path + ": " + e.what());
    }
    std::map<CaseId, KpiReport> kpis;
    try {
        for (const auto& item : j.at("cases").items()) {
            const auto id = case_from_string(item.key());
            if (!id) throw ParseError(path + ": unknown case '" + item.key() + "'");
            KpiReport kpi;
            const json& c = item.value();
            c.at("comfort_violation_kh").get_to(kpi.comfort_violation_kh);
            c.at("energy_kwh").get_to(kpi.energy_kwh);
            c.at("cost_chf").get_to(kpi.cost_chf);
            c.at("flex_compliance_rate").get_to(kpi.flex_compliance_rate);
            c.at("n_windows").get_to(kpi.n_windows);
            c.at("n_compliant").get_to(kpi.n_compliant);
            c.at("reward_sum").get_to(kpi.reward_sum);
            kpis[*id] = kpi;
        }
    } catch (const json::exception& e) {
        throw ParseError(path + ": " + e.what());
    }
    return kpis;
}

namespace {

struct Panel {
    double y_top, y_bottom;
    double v_min, v_max;

    double y(double v) const {
        const double f = (v - v_min) / (v_max - v_min);
        return y_bottom - f * (y_bottom - y_top);
    }
};

constexpr double kPlotLeft = 62.0;
constexpr double kPlotRight = 988.0;

double x_of(int t, int n) { return kPlotLeft + (kPlotRight - kPlotLeft) * t / std::max(1, n); }

void polyline(std::ostream& os, const std::vector<std::pair<double, double>>& pts,
              const char* color, double width, const char* dash = nullptr) {
    os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"" << width << "\"";
    if (dash) os << " stroke-dasharray=\"" << dash << "\"";
    os << " points=\"";
    for (const auto& [x, y] : pts) os << f2(x) << ',' << f2(y) << ' ';
    os << "\"/>\n";
}

void hline(std::ostream& os, double y, const char* color, const char* dash) {
    os << "<line x1=\"" << f2(kPlotLeft) << "\" y1=\"" << f2(y) << "\" x2=\"" << f2(kPlotRight)
       << "\" y2=\"" << f2(y) << "\" stroke=\"" << color << "\" stroke-width=\"1\""
       << " stroke-dasharray=\"" << dash << "\"/>\n";
}

void label(std::ostream& os, double x, double y, const std::string& text, int size = 11,
           const char* anchor = "start", const char* color = "#333333") {
    os << "<text x=\"" << f2(x) << "\" y=\"" << f2(y) << "\" font-size=\"" << size
       << "\" font-family=\"sans-serif\" text-anchor=\"" << anchor << "\" fill=\"" << color
       << "\">" << text << "</text>\n";
}

const char* case_color(CaseId id) {
    switch (id) {
        case CaseId::RB: return "#8c8c8c";
        case CaseId::DRL_NOFLEX: return "#4c78a8";
        case CaseId::DRL_FLEX: return "#f58518";
        case CaseId::DRL_FLEX_RASF: return "#54a24b";
    }
    return "#000000";
}

}  // namespace

std::string trajectory_svg(const Trajectory& traj, const TimeGrid& grid,
                           const ComfortBand& band, const std::string& title) {
    const int n = static_cast<int>(traj.steps.size());
    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"1000\" height=\"470\" "
          "viewBox=\"0 0 1000 470\">\n";
    os << "<rect width=\"1000\" height=\"470\" fill=\"#ffffff\"/>\n";
    label(os, 500, 16, title, 14, "middle", "#111111");
    if (n == 0) {
        label(os, 500, 235, "empty trajectory", 12, "middle");
        os << "</svg>\n";
        return os.str();
    }

    double t_lo = band.t_min, t_hi = band.t_max;
    double price_hi = 0.0;
    for (const StepRecord& r : traj.steps) {
        t_lo = std::min(t_lo, r.t_room_c);
        t_hi = std::max(t_hi, r.t_room_c);
        price_hi = std::max(price_hi, r.price_chf_per_kwh);
    }
    const Panel temp{28, 180, t_lo - 0.3, t_hi + 0.3};
    const Panel act{208, 310, 0.0, 1.0};
    const Panel price{338, 440, 0.0, price_hi > 0 ? price_hi * 1.1 : 1.0};

    // shaded flexibility windows across the temperature and action panels
    for (const WindowOutcome& w : traj.windows) {
        for (const Panel& p : {temp, act}) {
            os << "<rect x=\"" << f2(x_of(w.request.t_start, n)) << "\" y=\"" << f2(p.y_top)
               << "\" width=\"" << f2(x_of(w.request.t_end, n) - x_of(w.request.t_start, n))
               << "\" height=\"" << f2(p.y_bottom - p.y_top)
               << "\" fill=\"#bcd9f5\" opacity=\"0.45\"/>\n";
        }
    }

    // day boundaries
    for (int t = 0; t <= n; t += grid.steps_per_day()) {
        const double x = x_of(t, n);
        os << "<line x1=\"" << f2(x) << "\" y1=\"28\" x2=\"" << f2(x)
           << "\" y2=\"440\" stroke=\"#e0e0e0\" stroke-width=\"1\"/>\n";
        if (t < n)
            label(os, x + 3, 454, format_timestamp(grid.minutes_at(t)).substr(0, 10), 10);
    }

    std::vector<std::pair<double, double>> pts;
    pts.reserve(n);
    for (const StepRecord& r : traj.steps) pts.push_back({x_of(r.t, n), temp.y(r.t_room_c)});
    polyline(os, pts, "#d62728", 1.5);
    hline(os, temp.y(band.t_min), "#999999", "4,3");
    hline(os, temp.y(band.t_max), "#999999", "4,3");
    label(os, 8, temp.y(band.t_min) + 4, f2(band.t_min), 10);
    label(os, 8, temp.y(band.t_max) + 4, f2(band.t_max), 10);
    label(os, kPlotLeft, 24, "room temperature [C]", 11);

    pts.clear();
    for (const StepRecord& r : traj.steps) {
        pts.push_back({x_of(r.t, n), act.y(r.u_safe)});
        pts.push_back({x_of(r.t + 1, n), act.y(r.u_safe)});
    }
    polyline(os, pts, "#1f77b4", 1.2);
    bool filtered = false;
    for (const StepRecord& r : traj.steps) filtered = filtered || r.u_safe != r.u_proposed;
    if (filtered) {
        pts.clear();
        for (const StepRecord& r : traj.steps) {
            pts.push_back({x_of(r.t, n), act.y(r.u_proposed)});
            pts.push_back({x_of(r.t + 1, n), act.y(r.u_proposed)});
        }
        polyline(os, pts, "#aaaaaa", 1.0, "2,2");
    }
    label(os, 8, act.y(0.0) + 4, "0", 10);
    label(os, 8, act.y(1.0) + 4, "1", 10);
    label(os, kPlotLeft, 204, filtered ? "valve u (gray: proposal)" : "valve u", 11);

    pts.clear();
    for (const StepRecord& r : traj.steps) {
        pts.push_back({x_of(r.t, n), price.y(r.price_chf_per_kwh)});
        pts.push_back({x_of(r.t + 1, n), price.y(r.price_chf_per_kwh)});
    }
    polyline(os, pts, "#2ca02c", 1.2);
    label(os, 8, price.y(0.0) + 4, "0", 10);
    label(os, kPlotLeft, 334, "price [CHF/kWh]", 11);

    os << "</svg>\n";
    return os.str();
}

std::string kpi_svg(const std::map<CaseId, KpiReport>& kpis) {
    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"940\" height=\"330\" "
          "viewBox=\"0 0 940 330\">\n";
    os << "<rect width=\"940\" height=\"330\" fill=\"#ffffff\"/>\n";
    label(os, 470, 18, "KPI comparison", 14, "middle", "#111111");
    if (kpis.empty()) {
        label(os, 470, 165, "no cases", 12, "middle");
        os << "</svg>\n";
        return os.str();
    }

    struct Group {
        const char* name;
        double (*get)(const KpiReport&);
    };
    const Group groups[] = {
        {"energy [kWh]", [](const KpiReport& k) { return k.energy_kwh; }},
        {"cost [CHF]", [](const KpiReport& k) { return k.cost_chf; }},
        {"comfort violations [Kh]", [](const KpiReport& k) { return k.comfort_violation_kh; }},
    };
    const double base_y = 250.0, top_y = 60.0;
    const double group_w = 280.0;
    const int n_cases = static_cast<int>(kpis.size());
    const double bar_w = (group_w - 40.0) / n_cases - 8.0;

    // legend with compliance rates
    double lx = 40.0;
    for (const auto& [id, kpi] : kpis) {
        os << "<rect x=\"" << f2(lx) << "\" y=\"292\" width=\"12\" height=\"12\" fill=\""
           << case_color(id) << "\"/>\n";
        char buf[96];
        std::snprintf(buf, sizeof buf, "%s (compliance %.0f%%)", to_string(id),
                      100.0 * kpi.flex_compliance_rate);
        label(os, lx + 16, 302, buf, 11);
        lx += 225.0;
    }

    for (int g = 0; g < 3; ++g) {
        const double gx = 40.0 + g * (group_w + 20.0);
        double v_max = 0.0;
        for (const auto& [id, kpi] : kpis) v_max = std::max(v_max, groups[g].get(kpi));
        if (v_max <= 0.0) v_max = 1.0;
        os << "<line x1=\"" << f2(gx) << "\" y1=\"" << f2(base_y) << "\" x2=\""
           << f2(gx + group_w - 40.0) << "\" y2=\"" << f2(base_y)
           << "\" stroke=\"#333333\" stroke-width=\"1\"/>\n";
        label(os, gx + (group_w - 40.0) / 2.0, 272, groups[g].name, 12, "middle");
        double bx = gx + 8.0;
        for (const auto& [id, kpi] : kpis) {
            const double v = groups[g].get(kpi);
            const double h = (base_y - top_y) * v / v_max;
            os << "<rect x=\"" << f2(bx) << "\" y=\"" << f2(base_y - h) << "\" width=\""
               << f2(bar_w) << "\" height=\"" << f2(h) << "\" fill=\"" << case_color(id)
               << "\"/>\n";
            label(os, bx + bar_w / 2.0, base_y - h - 4.0, f2(v), 10, "middle");
            bx += bar_w + 8.0;
        }
    }
    os << "</svg>\n";
    return os.str();
}

void emit_report(const std::map<CaseId, KpiReport>& kpis,
                 const std::map<CaseId, Trajectory>& trajectories, const TimeGrid& grid,
                 const ComfortBand& band, const std::string& bau_source,
                 const std::string& out_dir) {
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) throw IoError("cannot create output directory: " + out_dir);
    const std::filesystem::path dir(out_dir);

    write_kpi_report(kpis, trajectories, bau_source, (dir / "kpi_report.json").string());
    for (const auto& [id, traj] : trajectories) {
        const std::string name = to_string(id);
        write_trajectory_csv(traj, grid, (dir / ("trajectory_" + name + ".csv")).string());
        std::ofstream os = open_out((dir / ("trajectory_" + name + ".svg")).string());
        os << trajectory_svg(traj, grid, band, name);
        os.flush();
        if (!os) throw IoError("write failed: trajectory_" + name + ".svg");
    }
    if (!kpis.empty()) {
        std::ofstream os = open_out((dir / "kpi_comparison.svg").string());
        os << kpi_svg(kpis);
        os.flush();
        if (!os) throw IoError("write failed: kpi_comparison.svg");
    }
}

}  // namespace heatrl
