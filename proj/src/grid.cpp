#include "heatrl/grid.hpp"

#include <cctype>
#include <cstdio>

#include "heatrl/errors.hpp"

namespace heatrl {

namespace {

// Howard Hinnant's civil-date algorithms, specialized to what the grid needs.
std::int64_t days_from_civil(int y, int m, int d) {
    y -= m <= 2;
    const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153u * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

void civil_from_days(std::int64_t z, int& y, int& m, int& d) {
    z += 719468;
    const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
    const unsigned doe = static_cast<unsigned>(z - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    const std::int64_t yr = static_cast<std::int64_t>(yoe) + era * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    d = static_cast<int>(doy - (153 * mp + 2) / 5 + 1);
    m = static_cast<int>(mp + (mp < 10 ? 3 : -9));
    y = static_cast<int>(yr + (m <= 2));
}

bool is_leap(int y) { return (y % 4 == 0 && y % 100 != 0) || y % 400 == 0; }

}  // namespace

int TimeGrid::day_of_week(int step) const {
    const std::int64_t days = minutes_at(step) / 1440;
    // day 0 (1970-01-01) was a Thursday = index 3 counting from Monday.
    return static_cast<int>(((days + 3) % 7 + 7) % 7);
}

int TimeGrid::day_of_year(int step) const {
    int y, m, d;
    civil_from_days(minutes_at(step) / 1440, y, m, d);
    return static_cast<int>(minutes_at(step) / 1440 - days_from_civil(y, 1, 1));
}

std::string format_timestamp(std::int64_t minutes) {
    int y, m, d;
    civil_from_days(minutes >= 0 ? minutes / 1440 : (minutes - 1439) / 1440, y, m, d);
    const int mod = static_cast<int>(((minutes % 1440) + 1440) % 1440);
    char buf[24];
    std::snprintf(buf, sizeof(buf), "%04d-%02d-%02dT%02d:%02d", y, m, d, mod / 60, mod % 60);
    return buf;
}

std::int64_t parse_timestamp(const std::string& text) {
    int y = 0, mo = 0, d = 0, h = 0, mi = 0;
    char sep = 0;
    if (std::sscanf(text.c_str(), "%d-%d-%d%c%d:%d", &y, &mo, &d, &sep, &h, &mi) != 6 ||
        (sep != 'T' && sep != ' ')) {
        throw ParseError("invalid timestamp '" + text + "' (expected YYYY-MM-DDTHH:MM)");
    }
    if (mo < 1 || mo > 12 || d < 1 || d > 31 || h < 0 || h > 23 || mi < 0 || mi > 59) {
        throw ParseError("timestamp field out of range in '" + text + "'");
    }
    static const int mdays[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
    const int dmax = (mo == 2 && is_leap(y)) ? 29 : mdays[mo - 1];
    if (d > dmax) {
        throw ParseError("timestamp day out of range in '" + text + "'");
    }
    return days_from_civil(y, mo, d) * 1440 + h * 60 + mi;
}

void validate_request(const FlexibilityRequest& r, double phi_low, double phi_high, int max_steps) {
    if (!(r.announced_at <= r.t_start)) {
        throw InputError("flexibility request announced after its window start");
    }
    if (!(r.t_start < r.t_end)) {
        throw InputError("flexibility request window is empty");
    }
    if (!(r.phi >= phi_low && r.phi <= phi_high)) {
        throw InputError("flexibility factor outside configured bounds");
    }
    if (r.duration_steps() > max_steps) {
        throw InputError("flexibility window exceeds maximum duration");
    }
}

double normalize(double x, const NormSpec& spec) {
    if (!spec.valid()) {
        throw ConfigError("normalization spec requires raw_min < raw_max");
    }
    if (x <= spec.raw_min) return kNormLow;
    if (x >= spec.raw_max) return kNormHigh;
    return kNormLow + (x - spec.raw_min) * (kNormHigh - kNormLow) / (spec.raw_max - spec.raw_min);
}

double denormalize(double y, const NormSpec& spec) {
    if (!spec.valid()) {
        throw ConfigError("normalization spec requires raw_min < raw_max");
    }
    return spec.raw_min + (y - kNormLow) * (spec.raw_max - spec.raw_min) / (kNormHigh - kNormLow);
}

std::pair<int, int> window_features(int t, const std::optional<FlexibilityRequest>& request) {
    if (!request || t < request->announced_at || t >= request->t_end) {
        return {0, 0};
    }
    if (t < request->t_start) {
        return {request->t_start - t, request->t_end - t};
    }
    return {0, request->t_end - t};
}

double flexibility_budget(const FlexibilityRequest& request, double e_bau_window_kwh) {
    if (e_bau_window_kwh < 0.0) {
        throw InputError("business-as-usual window energy must be non-negative");
    }
    return request.phi * e_bau_window_kwh;
}

}  // namespace heatrl
