#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace shotscore {

// Fixed "%.9g" rendering so repeated runs emit byte-identical text.
std::string format_real(double v);

// Whole file as lines; handles \r\n, throws IoError if unreadable.
std::vector<std::string> read_lines(const std::filesystem::path& path);

std::vector<std::string> split_csv(const std::string& line);

// Strict numeric parsing; `field` names the offending value in the error.
double parse_real(const std::string& s, const std::string& field);
long long parse_int(const std::string& s, const std::string& field);

void write_text_file(const std::filesystem::path& path,
                     const std::string& content);

}  // namespace shotscore
