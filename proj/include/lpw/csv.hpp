#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace lpw::csv {

// In-memory CSV table. Cells are unescaped strings; blank cells stay empty.
struct Table {
    std::string origin;                         // path or stream label, for messages
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows; // sized to header width

    // 1-based file line of data row i (header is line 1).
    int line_of(std::size_t row) const { return static_cast<int>(row) + 2; }

    std::optional<std::size_t> column(std::string_view name) const;
    // Throws SchemaError naming the column when absent.
    std::size_t require_column(std::string_view name, const std::string& module) const;
};

Table read_file(const std::string& path, const std::string& module);
Table read_stream(std::istream& in, const std::string& origin, const std::string& module);

void write_row(std::ostream& out, const std::vector<std::string>& cells);
std::string escape(std::string_view cell);

// Simple `key = value` config text, `#` comments, order preserved.
struct KeyValues {
    std::string origin;
    std::vector<std::pair<std::string, std::string>> entries;

    std::optional<std::string> get(std::string_view key) const;
};

KeyValues read_key_values(const std::string& path, const std::string& module);

// Shared cell parsers. All throw SchemaError with origin/line context.
double parse_double(std::string_view cell, const std::string& module,
                    const std::string& context);
int parse_int(std::string_view cell, const std::string& module,
              const std::string& context);
std::string trim(std::string_view s);
std::string lower(std::string_view s);

}  // namespace lpw::csv
