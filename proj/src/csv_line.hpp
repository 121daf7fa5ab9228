#pragma once

#include <string>
#include <vector>

namespace heatrl::csv {

// Splits one CSV line on plain commas (no quoting; none of our formats
// needs it) and strips a trailing carriage return.
std::vector<std::string> split(std::string line);

// Strict double/int/bool field parsers; all throw ParseError naming the
// file, row, and column on any malformed or non-finite value.
double number(const std::string& field, const std::string& path, int row, const char* col);
long long integer(const std::string& field, const std::string& path, int row, const char* col);
bool flag(const std::string& field, const std::string& path, int row, const char* col);

}  // namespace heatrl::csv
