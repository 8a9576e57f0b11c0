#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace winnower {

std::string read_file(const std::filesystem::path& path);

// Writes via a sibling temporary file and rename, so readers never observe a
// partially written file.
void write_file_atomic(const std::filesystem::path& path,
                       std::string_view contents);

void append_file(const std::filesystem::path& path, std::string_view contents);

std::vector<std::string> split(std::string_view line, char sep);

// Lines without their terminators; a trailing '\r' is dropped.
std::vector<std::string> read_lines(const std::filesystem::path& path);

// Shortest decimal form that parses back to exactly `value`.
std::string format_double(double value);

double parse_double(std::string_view text);
long long parse_int(std::string_view text);

}  // namespace winnower
