#pragma once

#include <string>
#include <vector>

namespace fmrbench {

// Shortest round-trip decimal representation. All CSV/JSON emitters go
// through this so repeated runs produce byte-identical files.
std::string format_double(double v);

std::vector<std::string> split(const std::string& s, char sep);

// Strict double parse; the whole token must be consumed.
bool parse_double(const std::string& s, double& out);

// Write-temp-then-rename so partially written outputs are never observed.
void write_file_atomic(const std::string& path, const std::string& content);

std::string read_file(const std::string& path);

}  // namespace fmrbench
