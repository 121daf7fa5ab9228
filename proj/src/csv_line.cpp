#include "csv_line.hpp"

#include <charconv>
#include <cmath>

#include "heatrl/errors.hpp"

namespace heatrl::csv {

std::vector<std::string> split(std::string line) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::vector<std::string> fields;
    std::size_t pos = 0;
    while (true) {
        const std::size_t comma = line.find(',', pos);
        if (comma == std::string::npos) {
            fields.push_back(line.substr(pos));
            break;
        }
        fields.push_back(line.substr(pos, comma - pos));
        pos = comma + 1;
    }
    return fields;
}

namespace {

[[noreturn]] void bad_field(const std::string& path, int row, const char* col,
                            const std::string& what) {
    throw ParseError(path + ": row " + std::to_string(row) + ", column " + col + ": " + what);
}

}  // namespace

double number(const std::string& field, const std::string& path, int row, const char* col) {
    double v = 0.0;
    const char* b = field.data();
    const char* e = b + field.size();
    while (b < e && (*b == ' ' || *b == '\t')) ++b;
    const auto [ptr, ec] = std::from_chars(b, e, v);
    if (ec != std::errc{} || ptr != e) bad_field(path, row, col, "not a number: '" + field + "'");
    if (!std::isfinite(v)) bad_field(path, row, col, "non-finite value");
    return v;
}

long long integer(const std::string& field, const std::string& path, int row, const char* col) {
    long long v = 0;
    const char* b = field.data();
    const char* e = b + field.size();
    while (b < e && (*b == ' ' || *b == '\t')) ++b;
    const auto [ptr, ec] = std::from_chars(b, e, v);
    if (ec != std::errc{} || ptr != e)
        bad_field(path, row, col, "not an integer: '" + field + "'");
    return v;
}

bool flag(const std::string& field, const std::string& path, int row, const char* col) {
    if (field == "0") return false;
    if (field == "1") return true;
    bad_field(path, row, col, "expected 0 or 1, got '" + field + "'");
}

}  // namespace heatrl::csv
