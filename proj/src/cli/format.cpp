#include "format.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace stheat::cli {

OutputFormat parse_format(const std::string& s) {
    if (s == "markdown") return OutputFormat::markdown;
    if (s == "csv") return OutputFormat::csv;
    if (s == "json") return OutputFormat::json;
    throw std::invalid_argument("unknown output format: " + s);
}

std::string display_value(double v, bool compress_large) {
    char buf[64];
    const int decimals = (compress_large && std::abs(v) >= 10.0) ? 2 : 4;
    std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
    return buf;
}

std::string full_precision(double v) {
    char buf[64];
    // %.17g always round-trips; prefer the shortest form that does
    for (int prec = 15; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof buf, "%.*g", prec, v);
        double back = 0.0;
        std::sscanf(buf, "%lf", &back);
        if (back == v) return buf;
    }
    return buf;
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

std::string render_markdown(const TextTable& t) {
    const std::size_t ncol = t.header.size();
    std::vector<std::size_t> width(ncol);
    for (std::size_t c = 0; c < ncol; ++c) width[c] = t.header[c].size();
    for (const auto& row : t.rows)
        for (std::size_t c = 0; c < std::min(ncol, row.size()); ++c)
            width[c] = std::max(width[c], row[c].size());

    std::ostringstream os;
    auto line = [&](const std::vector<std::string>& cells) {
        os << '|';
        for (std::size_t c = 0; c < ncol; ++c) {
            const std::string& s = c < cells.size() ? cells[c] : std::string();
            os << ' ' << s << std::string(width[c] - s.size(), ' ') << " |";
        }
        os << '\n';
    };
    line(t.header);
    os << '|';
    for (std::size_t c = 0; c < ncol; ++c) os << std::string(width[c] + 2, '-') << '|';
    os << '\n';
    for (const auto& row : t.rows) line(row);
    return os.str();
}

std::string render_csv(const TextTable& t) {
    std::ostringstream os;
    auto line = [&](const std::vector<std::string>& cells) {
        for (std::size_t c = 0; c < cells.size(); ++c) {
            if (c) os << ',';
            os << csv_field(cells[c]);
        }
        os << '\n';
    };
    line(t.header);
    for (const auto& row : t.rows) line(row);
    return os.str();
}

}  // namespace stheat::cli
