#pragma once

#include <string>
#include <vector>

namespace stheat::cli {

enum class OutputFormat { markdown, csv, json };

/// Parses "markdown" / "csv" / "json"; throws std::invalid_argument otherwise.
OutputFormat parse_format(const std::string& s);

/// Display-precision cell text: four decimals, or two once the value
/// reaches 10 when `compress_large` is set (the style of the reference
/// eta_hat column).
std::string display_value(double v, bool compress_large);

/// Shortest exact decimal form (printf %.17g trimmed through %g).
std::string full_precision(double v);

/// RFC-4180 style quoting, applied only when the cell needs it.
std::string csv_field(const std::string& s);

/// Rectangular string table rendered to either text format.
struct TextTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

std::string render_markdown(const TextTable& t);
std::string render_csv(const TextTable& t);

}  // namespace stheat::cli
