#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "geit/analysis.hpp"
#include "geit/dde.hpp"

namespace geit {

// Locale-independent decimal text for a double. The one-argument form emits
// the shortest string that parses back to the same value; the two-argument
// form emits a fixed number of significant digits.
std::string format_double(double v);
std::string format_double(double v, int significant_digits);

// Write a file atomically: stream to <path>.tmp then rename over the target,
// so readers never observe a partially written file.
void atomic_write(const std::filesystem::path& path, std::string_view content);

// CSV renderings with 17-significant-digit numeric fields.
std::string spectrum_csv(const Spectrum& spectrum);
std::string trajectory_csv(const Trajectory& trajectory);

}  // namespace geit
