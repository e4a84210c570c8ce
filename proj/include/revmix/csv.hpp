#pragma once

#include <cstdint>
#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

namespace revmix {

// Shortest round-trip decimal form; deterministic across runs.
std::string format_double(double x);

std::string csv_row(const std::vector<std::string>& cells);

// Writes via a temp file in the same directory, then renames.
void atomic_write_file(const std::filesystem::path& path, const std::string& content);

class CsvBuilder {
  public:
    void header(const std::vector<std::string>& names) { row(names); }

    void row(const std::vector<std::string>& cells) { buf_ << csv_row(cells); }

    std::string str() const { return buf_.str(); }

    void write(const std::filesystem::path& path) const { atomic_write_file(path, str()); }

  private:
    std::ostringstream buf_;
};

}  // namespace revmix
