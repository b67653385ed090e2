#pragma once

#include <array>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace fringelab::csv {

/// Shortest text that round-trips the double (17 significant digits).
std::string number(double v);

/// Rows of a numeric CSV whose first line must equal `header`.
std::vector<std::vector<double>> read_numeric(const std::filesystem::path& path,
                                              std::string_view header, std::size_t columns);

/// Split on commas, no quoting.
std::vector<std::string> split(std::string_view line, char sep = ',');

}  // namespace fringelab::csv
