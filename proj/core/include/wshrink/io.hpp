#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "wshrink/wavelet.hpp"

namespace wshrink::io {

/// Shortest text that reads back to the same double ("%.17g"); inf/nan
/// spelled "inf", "-inf", "nan".
std::string format_double(double x);
/// Parses a decimal (or inf/-inf/nan). InputError naming `what` otherwise.
double parse_double(const std::string& text, const std::string& what);
long long parse_int(const std::string& text, const std::string& what);
std::vector<double> parse_double_list(const std::string& text, const std::string& what);
std::string join_doubles(const std::vector<double>& values);

std::string trim(const std::string& s);

/// `key = value` lines; blank lines and `#` comments skipped. Duplicate
/// keys and lines without '=' are InputErrors.
std::map<std::string, std::string> parse_key_values(const std::string& text);

std::string read_file(const std::filesystem::path& path);
/// Writes to a sibling temporary file and renames it over `path`.
void atomic_write(const std::filesystem::path& path, const std::string& contents);

/// One finite decimal per line; the count must be a power of two.
Signal read_signal(const std::filesystem::path& path);
Signal parse_signal(const std::string& text);
std::string format_signal(const Signal& signal);
void write_signal(const std::filesystem::path& path, const Signal& signal);

}  // namespace wshrink::io
