#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace archive_lens::text {

std::string_view trim(std::string_view s);
std::string to_lower_ascii(std::string_view s);
std::string to_upper_ascii(std::string_view s);
bool iequals(std::string_view a, std::string_view b);
bool starts_with(std::string_view s, std::string_view prefix);
std::vector<std::string> split(std::string_view s, char sep);
std::vector<std::string> split_whitespace(std::string_view s);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view contents);

// Lines without their terminators; a trailing '\r' is dropped.
std::vector<std::string_view> lines(std::string_view contents);

}  // namespace archive_lens::text
