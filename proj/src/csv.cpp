#include "lpw/csv.hpp"

#include <cctype>
#include <cmath>
#include <cerrno>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "lpw/errors.hpp"

namespace lpw::csv {

std::string trim(std::string_view s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
}

std::string lower(std::string_view s) {
    std::string out(s);
    for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

namespace {

// One CSV record; handles quoted cells with embedded commas/quotes/newlines.
bool read_record(std::istream& in, std::vector<std::string>& cells, int& line) {
    cells.clear();
    std::string cell;
    bool in_quotes = false;
    bool any = false;
    int c;
    while ((c = in.get()) != EOF) {
        any = true;
        if (in_quotes) {
            if (c == '"') {
                if (in.peek() == '"') {
                    cell.push_back('"');
                    in.get();
                } else {
                    in_quotes = false;
                }
            } else {
                if (c == '\n') ++line;
                cell.push_back(static_cast<char>(c));
            }
        } else if (c == '"') {
            in_quotes = true;
        } else if (c == ',') {
            cells.push_back(cell);
            cell.clear();
        } else if (c == '\n') {
            ++line;
            break;
        } else if (c != '\r') {
            cell.push_back(static_cast<char>(c));
        }
    }
    if (!any) return false;
    cells.push_back(cell);
    return true;
}

}  // namespace

std::optional<std::size_t> Table::column(std::string_view name) const {
    const std::string want = lower(name);
    for (std::size_t i = 0; i < header.size(); ++i)
        if (lower(trim(header[i])) == want) return i;
    return std::nullopt;
}

std::size_t Table::require_column(std::string_view name, const std::string& module) const {
    auto idx = column(name);
    if (!idx)
        throw SchemaError(module, origin + ": missing required column '" + std::string(name) + "'");
    return *idx;
}

Table read_stream(std::istream& in, const std::string& origin, const std::string& module) {
    Table t;
    t.origin = origin;
    int line = 1;
    std::vector<std::string> cells;
    if (!read_record(in, cells, line))
        throw SchemaError(module, origin + ": empty file, expected a header row");
    // Spreadsheet exports often lead with a UTF-8 BOM.
    if (!cells.empty() && cells[0].rfind("\xEF\xBB\xBF", 0) == 0) cells[0].erase(0, 3);
    for (auto& h : cells) h = trim(h);
    t.header = cells;
    while (read_record(in, cells, line)) {
        if (cells.size() == 1 && trim(cells[0]).empty()) continue;  // blank line
        if (cells.size() != t.header.size()) {
            std::ostringstream msg;
            msg << origin << ": row " << (t.rows.size() + 2) << " has " << cells.size()
                << " cells, header has " << t.header.size();
            throw SchemaError(module, msg.str());
        }
        t.rows.push_back(cells);
    }
    return t;
}

Table read_file(const std::string& path, const std::string& module) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw IoError(module, "cannot open file: " + path);
    return read_stream(f, path, module);
}

std::string escape(std::string_view cell) {
    bool needs = cell.find_first_of(",\"\n\r") != std::string_view::npos;
    if (!needs) return std::string(cell);
    std::string out = "\"";
    for (char c : cell) {
        if (c == '"') out += "\"\"";
        else out.push_back(c);
    }
    out += "\"";
    return out;
}

void write_row(std::ostream& out, const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) out << ',';
        out << escape(cells[i]);
    }
    out << '\n';
}

std::optional<std::string> KeyValues::get(std::string_view key) const {
    for (const auto& [k, v] : entries)
        if (k == key) return v;
    return std::nullopt;
}

KeyValues read_key_values(const std::string& path, const std::string& module) {
    std::ifstream f(path);
    if (!f) throw IoError(module, "cannot open file: " + path);
    KeyValues kv;
    kv.origin = path;
    std::string line;
    int lineno = 0;
    while (std::getline(f, line)) {
        ++lineno;
        std::string s = trim(line);
        if (s.empty() || s[0] == '#') continue;
        auto eq = s.find('=');
        if (eq == std::string::npos) {
            std::ostringstream msg;
            msg << path << ":" << lineno << ": expected 'key = value', got '" << s << "'";
            throw SchemaError(module, msg.str());
        }
        kv.entries.emplace_back(trim(s.substr(0, eq)), trim(s.substr(eq + 1)));
    }
    return kv;
}

double parse_double(std::string_view cell, const std::string& module, const std::string& context) {
    const std::string s = trim(cell);
    if (s.empty()) throw SchemaError(module, context + ": empty numeric cell");
    errno = 0;
    char* end = nullptr;
    double v = std::strtod(s.c_str(), &end);
    if (errno != 0 || end != s.c_str() + s.size() || !std::isfinite(v))
        throw SchemaError(module, context + ": not a finite number: '" + s + "'");
    return v;
}

int parse_int(std::string_view cell, const std::string& module, const std::string& context) {
    const std::string s = trim(cell);
    if (s.empty()) throw SchemaError(module, context + ": empty integer cell");
    errno = 0;
    char* end = nullptr;
    long v = std::strtol(s.c_str(), &end, 10);
    if (errno != 0 || end != s.c_str() + s.size())
        throw SchemaError(module, context + ": not an integer: '" + s + "'");
    return static_cast<int>(v);
}

}  // namespace lpw::csv
