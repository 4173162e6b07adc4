#pragma once

#include <span>
#include <string>
#include <vector>

namespace lpw::report {

enum class Format { PlainTable, Delimited, Structured };
Format parse_format(std::string_view name);  // table|csv|json -> throws UsageError
std::string_view to_string(Format f);

// A typed table cell. Human formats round by kind (scores 2 decimals, LpW 3
// significant figures, ...); the structured format always carries full
// precision.
struct Cell {
    enum class Kind {
        Text, Integer, Score, Seconds, Joules, Watts, Lpw, Ratio, Probability, Generic
    };
    Kind kind = Kind::Text;
    std::string text;
    double num = 0.0;
    bool is_number = false;

    static Cell str(std::string s);
    static Cell integer(long v);
    static Cell of(double v, Kind k);
    static Cell na();  // explicit undefined marker
};

std::string format_cell(const Cell& c);

struct Table {
    std::string id;
    std::string title;
    std::string source_module;
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
    std::vector<std::string> notes;
};

struct AuditReport {
    std::string generated_at;
    std::string fingerprint;  // content hash over the input files
    std::vector<Table> sections;
    std::vector<std::pair<std::string, long>> clamp_counts;  // per config
    std::vector<std::string> warnings;
};

// Pure function of (report, format); repeated calls are byte-identical.
std::string render(const AuditReport& report, Format format);

// FNV-1a 64 over the given files' bytes, in the order given.
std::string fingerprint_files(std::span<const std::string> paths);

}  // namespace lpw::report
