#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace sevpred {

std::string read_file(const std::filesystem::path& path);

/// Write through a sibling temp file and rename over the target.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

/// Non-empty lines of a text file, paired with their 1-based line numbers.
std::vector<std::pair<int, std::string>> read_lines(const std::filesystem::path& path);

/// Shortest decimal string that parses back to exactly `value`.
std::string format_shortest(double value);

/// Minimal CSV: comma separated, no quoting (ids must not contain commas).
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  int column(std::string_view name) const;
};

CsvTable read_csv(const std::filesystem::path& path);
std::string to_csv(const CsvTable& table);

}  // namespace sevpred
