#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace semuq {

/// Shortest decimal form that round-trips the exact double. Used for every
/// number we print, so artifacts are byte-stable across runs.
std::string fmt_double(double v);
std::string fmt_int(int64_t v);

/// Whole-file helpers; throw IoError naming the path.
void write_text_file(const std::filesystem::path& file,
                     const std::string& content);
std::string read_text_file(const std::filesystem::path& file);

void write_binary_file(const std::filesystem::path& file,
                       const std::vector<unsigned char>& bytes);
std::vector<unsigned char> read_binary_file(const std::filesystem::path& file);

/// Minimal CSV split; fields in our files never contain commas or quotes.
std::vector<std::string> split_csv_line(const std::string& line);

double parse_double(const std::string& s);

}  // namespace semuq
