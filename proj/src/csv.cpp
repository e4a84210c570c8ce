#include "revmix/csv.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace revmix {

std::string format_double(double x) {
    char buf[64];
    // %.17g round-trips any binary64 value and is locale-independent for
    // the C locale the process runs in.
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return std::string(buf);
}

std::string csv_row(const std::vector<std::string>& cells) {
    std::string out;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) out += ',';
        out += cells[i];
    }
    out += '\n';
    return out;
}

void atomic_write_file(const std::filesystem::path& path, const std::string& content) {
    namespace fs = std::filesystem;
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
        if (!os) throw std::runtime_error("cannot open " + tmp.string());
        os << content;
        if (!os) throw std::runtime_error("write failed: " + tmp.string());
    }
    fs::rename(tmp, path);
}

}  // namespace revmix
