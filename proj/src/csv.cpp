#include "fringelab/csv.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "fringelab/error.hpp"

namespace fringelab::csv {

std::string number(double v) {
  char buf[40];
  const int n = std::snprintf(buf, sizeof buf, "%.17g", v);
  return {buf, static_cast<std::size_t>(n)};
}

std::vector<std::string> split(std::string_view line, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(sep, start);
    out.emplace_back(line.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::vector<std::vector<double>> read_numeric(const std::filesystem::path& path,
                                              std::string_view header, std::size_t columns) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::string line;
  if (!std::getline(in, line) || line != header) {
    throw ValidationError(path.string() + ": expected header '" + std::string(header) + "'");
  }
  std::vector<std::vector<double>> rows;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto fields = split(line);
    if (fields.size() != columns) {
      throw ValidationError(path.string() + ":" + std::to_string(lineno) + ": wrong column count");
    }
    std::vector<double> row;
    for (const auto& f : fields) {
      double v = 0.0;
      const auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), v);
      if (ec != std::errc() || ptr != f.data() + f.size()) {
        throw ValidationError(path.string() + ":" + std::to_string(lineno) + ": bad number '" + f + "'");
      }
      row.push_back(v);
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace fringelab::csv
