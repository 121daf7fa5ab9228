#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>

namespace heatrl {

// Uniform simulation grid. Timestamps are naive civil time measured in
// minutes since 1970-01-01 00:00; there is no time-zone or DST handling.
struct TimeGrid {
    std::int64_t start_minutes = 0;
    int step_minutes = 15;
    int n_steps = 0;

    bool valid() const { return step_minutes > 0 && n_steps > 0; }
    double step_hours() const { return step_minutes / 60.0; }
    int steps_per_day() const { return 1440 / step_minutes; }
    bool spans_whole_days() const {
        return valid() && 1440 % step_minutes == 0 && start_minutes % 1440 == 0 &&
               n_steps % steps_per_day() == 0;
    }

    std::int64_t minutes_at(int step) const {
        return start_minutes + static_cast<std::int64_t>(step) * step_minutes;
    }
    int minute_of_day(int step) const {
        return static_cast<int>(((minutes_at(step) % 1440) + 1440) % 1440);
    }
    // 0 = Monday ... 6 = Sunday (1970-01-01 was a Thursday).
    int day_of_week(int step) const;
    // 0-based day within the year of the timestamp.
    int day_of_year(int step) const;
};

// ISO-style naive timestamp "YYYY-MM-DDTHH:MM" <-> minutes since epoch.
std::string format_timestamp(std::int64_t minutes);
std::int64_t parse_timestamp(const std::string& text);

// Operator message F = (t_s, t_e, phi): scale consumption inside the window
// [t_start, t_end) to phi times the business-as-usual reference.
struct FlexibilityRequest {
    int t_start = 0;
    int t_end = 0;
    double phi = 1.0;
    int announced_at = 0;

    int duration_steps() const { return t_end - t_start; }
};

inline constexpr double kPhiLowDefault = 0.7;
inline constexpr double kPhiHighDefault = 1.3;
inline constexpr int kMaxWindowStepsDefault = 40;  // 10 h on a 15-min grid

// Throws InputError if the message violates its invariants.
void validate_request(const FlexibilityRequest& request,
                      double phi_low = kPhiLowDefault,
                      double phi_high = kPhiHighDefault,
                      int max_steps = kMaxWindowStepsDefault);

// Room-temperature comfort interval in deg C.
struct ComfortBand {
    double t_min = 23.5;
    double t_max = 25.0;

    bool valid() const { return t_min < t_max; }
};

// Min-max normalization of a physical range onto the fixed interval
// [0.1, 0.9]. Inputs outside [raw_min, raw_max] clamp to the endpoints so
// downstream consumers stay total on unseen extremes.
struct NormSpec {
    double raw_min = 0.0;
    double raw_max = 1.0;

    bool valid() const { return raw_min < raw_max; }
};

inline constexpr double kNormLow = 0.1;
inline constexpr double kNormHigh = 0.9;

double normalize(double x, const NormSpec& spec);
double denormalize(double y, const NormSpec& spec);

// Steps until the window starts / ends, as seen from step t. Both are 0
// once the window has elapsed, and also before the request is announced
// (the request is invisible until announced_at). Total function.
std::pair<int, int> window_features(int t, const std::optional<FlexibilityRequest>& request);

// Allowed window energy V(F) = phi * E_BAU over the window, in kWh.
double flexibility_budget(const FlexibilityRequest& request, double e_bau_window_kwh);

}  // namespace heatrl
