#include "lpw/report.hpp"

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "lpw/errors.hpp"

namespace lpw::report {

namespace {
constexpr const char* kModule = "report";

std::string printf_fmt(const char* fmt, double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), fmt, v);
    return buf;
}
}  // namespace

Format parse_format(std::string_view name) {
    if (name == "table") return Format::PlainTable;
    if (name == "csv") return Format::Delimited;
    if (name == "json") return Format::Structured;
    throw UsageError(kModule, "unknown format '" + std::string(name) +
                                  "'; expected table, csv, or json");
}

std::string_view to_string(Format f) {
    switch (f) {
        case Format::PlainTable: return "table";
        case Format::Delimited: return "csv";
        case Format::Structured: return "json";
    }
    return "?";
}

Cell Cell::str(std::string s) {
    Cell c;
    c.kind = Kind::Text;
    c.text = std::move(s);
    return c;
}

Cell Cell::integer(long v) {
    Cell c;
    c.kind = Kind::Integer;
    c.num = static_cast<double>(v);
    c.is_number = true;
    return c;
}

Cell Cell::of(double v, Kind k) {
    Cell c;
    c.kind = k;
    c.num = v;
    c.is_number = true;
    return c;
}

Cell Cell::na() {
    Cell c;
    c.kind = Kind::Text;
    c.text = "undefined";
    return c;
}

std::string format_cell(const Cell& c) {
    if (!c.is_number) return c.text;
    switch (c.kind) {
        case Cell::Kind::Integer: return std::to_string(static_cast<long>(c.num));
        case Cell::Kind::Score: return printf_fmt("%.2f", c.num);
        case Cell::Kind::Seconds: return printf_fmt("%.2f", c.num);
        case Cell::Kind::Joules: return printf_fmt("%.1f", c.num);
        case Cell::Kind::Watts: return printf_fmt("%.1f", c.num);
        case Cell::Kind::Lpw: return printf_fmt("%.2e", c.num);  // 3 significant figures
        case Cell::Kind::Ratio: return printf_fmt("%.3g", c.num);
        case Cell::Kind::Probability: return printf_fmt("%.4g", c.num);
        case Cell::Kind::Generic: return printf_fmt("%.6g", c.num);
        case Cell::Kind::Text: break;
    }
    return c.text;
}

namespace {

void render_plain(std::ostringstream& out, const AuditReport& r) {
    out << "audit report\n";
    out << "generated_at: " << r.generated_at << "\n";
    out << "fingerprint:  " << r.fingerprint << "\n";
    for (const auto& t : r.sections) {
        out << "\n== " << t.id << ": " << t.title << " [" << t.source_module << "]\n";
        std::vector<std::size_t> width(t.columns.size());
        std::vector<std::vector<std::string>> cells;
        for (std::size_t i = 0; i < t.columns.size(); ++i) width[i] = t.columns[i].size();
        for (const auto& row : t.rows) {
            std::vector<std::string> line;
            for (std::size_t i = 0; i < row.size(); ++i) {
                line.push_back(format_cell(row[i]));
                if (i < width.size()) width[i] = std::max(width[i], line.back().size());
            }
            cells.push_back(std::move(line));
        }
        auto pad = [&](const std::string& s, std::size_t w) {
            return s + std::string(w > s.size() ? w - s.size() : 0, ' ');
        };
        for (std::size_t i = 0; i < t.columns.size(); ++i)
            out << (i ? "  " : "") << pad(t.columns[i], width[i]);
        out << "\n";
        if (t.rows.empty()) out << "(empty)\n";
        for (const auto& line : cells) {
            for (std::size_t i = 0; i < line.size(); ++i)
                out << (i ? "  " : "") << pad(line[i], i < width.size() ? width[i] : 0);
            out << "\n";
        }
        for (const auto& n : t.notes) out << "note: " << n << "\n";
    }
    if (!r.clamp_counts.empty()) {
        out << "\nclamp incidence\n";
        for (const auto& [config, n] : r.clamp_counts)
            out << "  " << config << ": " << n << "\n";
    }
    if (!r.warnings.empty()) {
        out << "\nwarnings\n";
        for (const auto& w : r.warnings) out << "  - " << w << "\n";
    }
}

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += "\"\"";
        else out.push_back(c);
    }
    return out + "\"";
}

void render_delimited(std::ostringstream& out, const AuditReport& r) {
    out << "#meta,generated_at," << csv_escape(r.generated_at) << "\n";
    out << "#meta,fingerprint," << r.fingerprint << "\n";
    for (const auto& t : r.sections) {
        out << "#section," << t.id << "," << csv_escape(t.title) << "\n";
        for (std::size_t i = 0; i < t.columns.size(); ++i)
            out << (i ? "," : "") << csv_escape(t.columns[i]);
        out << "\n";
        for (const auto& row : t.rows) {
            for (std::size_t i = 0; i < row.size(); ++i)
                out << (i ? "," : "") << csv_escape(format_cell(row[i]));
            out << "\n";
        }
    }
    for (const auto& [config, n] : r.clamp_counts)
        out << "#clamp," << csv_escape(config) << "," << n << "\n";
    for (const auto& w : r.warnings) out << "#warning," << csv_escape(w) << "\n";
}

void render_structured(std::ostringstream& out, const AuditReport& r) {
    nlohmann::ordered_json doc;
    doc["generated_at"] = r.generated_at;
    doc["fingerprint"] = r.fingerprint;
    nlohmann::ordered_json sections = nlohmann::ordered_json::object();
    for (const auto& t : r.sections) {
        nlohmann::ordered_json sec;
        sec["title"] = t.title;
        sec["source_module"] = t.source_module;
        sec["columns"] = t.columns;
        nlohmann::ordered_json rows = nlohmann::ordered_json::array();
        for (const auto& row : t.rows) {
            nlohmann::ordered_json jr = nlohmann::ordered_json::array();
            for (const auto& c : row) {
                if (c.is_number) {
                    if (c.kind == Cell::Kind::Integer)
                        jr.push_back(static_cast<long>(c.num));
                    else
                        jr.push_back(c.num);  // full precision
                } else if (c.text == "undefined") {
                    jr.push_back(nullptr);
                } else {
                    jr.push_back(c.text);
                }
            }
            rows.push_back(std::move(jr));
        }
        sec["rows"] = std::move(rows);
        if (!t.notes.empty()) sec["notes"] = t.notes;
        sections[t.id] = std::move(sec);
    }
    doc["sections"] = std::move(sections);
    nlohmann::ordered_json clamp = nlohmann::ordered_json::object();
    for (const auto& [config, n] : r.clamp_counts) clamp[config] = n;
    doc["clamp_incidence"] = std::move(clamp);
    doc["warnings"] = r.warnings;
    out << doc.dump(2) << "\n";
}

}  // namespace

std::string render(const AuditReport& report, Format format) {
    std::ostringstream out;
    switch (format) {
        case Format::PlainTable: render_plain(out, report); break;
        case Format::Delimited: render_delimited(out, report); break;
        case Format::Structured: render_structured(out, report); break;
    }
    return out.str();
}

std::string fingerprint_files(std::span<const std::string> paths) {
    std::uint64_t h = 1469598103934665603ull;  // FNV-1a 64 offset basis
    auto mix = [&h](const char* data, std::size_t n) {
        for (std::size_t i = 0; i < n; ++i) {
            h ^= static_cast<unsigned char>(data[i]);
            h *= 1099511628211ull;
        }
    };
    for (const auto& p : paths) {
        mix(p.data(), p.size());
        mix("\x1f", 1);
        std::ifstream f(p, std::ios::binary);
        if (!f) throw IoError(kModule, "cannot open file for fingerprint: " + p);
        char buf[8192];
        while (f.read(buf, sizeof(buf)) || f.gcount() > 0) {
            mix(buf, static_cast<std::size_t>(f.gcount()));
            if (!f) break;
        }
        mix("\x1e", 1);
    }
    char hex[17];
    std::snprintf(hex, sizeof(hex), "%016llx", static_cast<unsigned long long>(h));
    return hex;
}

}  // namespace lpw::report
