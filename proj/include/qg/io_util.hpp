#pragma once

#include <string>

namespace qg {

std::string read_file(const std::string& path);

// Writes via a temp file in the same directory followed by a rename, so a
// partially written file is never observable at `path`.
void write_file_atomic(const std::string& path, const std::string& content);

// printf("%.<digits>g") formatting used by all text outputs.
std::string format_g(double value, int significant_digits = 15);

}  // namespace qg
