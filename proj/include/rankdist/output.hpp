#pragma once

// Tables emitted by the command-line tool, as CSV or JSON.
//
// Every cell is held as canonical text so that a record compares equal after
// a write/read cycle in either format:
//   exact    "p/q" or "p" (GMP canonical form)
//   integer  decimal digits, arbitrary length
//   real     shortest round-trip decimal (std::to_chars), or nan/inf/-inf
//   text     anything
// An empty cell means "not applicable" in every column type.
//
// CSV layout: tagged comment records first, then the header, then data rows.
//   #meta,command,exact
//   #param,n,5
//   #note,...
//   #types,integer,exact,...
//   k,a,...
// JSON layout: {"meta": {...}, "columns": [{"name","type"}], "rows": [[...]]}.
// Exact values and oversized integers are JSON strings, empty cells null.

#include "rankdist/rational.hpp"

#include <nlohmann/json.hpp>

#include <charconv>
#include <cmath>
#include <concepts>
#include <cstdint>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <system_error>
#include <utility>
#include <vector>

#ifndef RANKDIST_VERSION
#define RANKDIST_VERSION "0.1.0"
#endif

namespace rankdist::io {

enum class ColumnType { exact, integer, real, text };

inline const char* to_string(ColumnType t)
{
    switch (t) {
    case ColumnType::exact: return "exact";
    case ColumnType::integer: return "integer";
    case ColumnType::real: return "real";
    case ColumnType::text: return "text";
    }
    return "text";
}

inline ColumnType parse_column_type(const std::string& s)
{
    if (s == "exact") return ColumnType::exact;
    if (s == "integer") return ColumnType::integer;
    if (s == "real") return ColumnType::real;
    if (s == "text") return ColumnType::text;
    throw std::invalid_argument("unknown column type '" + s + "'");
}

struct Column {
    std::string name;
    ColumnType type = ColumnType::text;
    friend bool operator==(const Column&, const Column&) = default;
};

using Row = std::vector<std::string>;

struct OutputRecord {
    std::string command;
    std::string version = RANKDIST_VERSION;
    std::string seed; // empty when the command is not seeded
    std::vector<std::pair<std::string, std::string>> parameters;
    std::vector<std::string> notes;
    std::vector<Column> columns;
    std::vector<Row> rows;

    friend bool operator==(const OutputRecord&, const OutputRecord&) = default;
};

enum class Format { csv, json };

inline Format parse_format(const std::string& s)
{
    if (s == "csv") return Format::csv;
    if (s == "json") return Format::json;
    throw std::invalid_argument("unknown format '" + s + "' (csv or json)");
}

// ---------------------------------------------------------------------------
// Cells

inline std::string cell(const ExactRational& q) { return q.get_str(); }
inline std::string cell(const BigInt& z) { return z.get_str(); }
inline std::string cell(std::string s) { return s; }
inline std::string cell(const char* s) { return s; }
inline std::string cell(bool b) { return b ? "1" : "0"; }

template <std::integral I>
    requires(!std::same_as<I, bool>)
std::string cell(I v)
{
    return std::to_string(v);
}

inline std::string cell(double x)
{
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

inline double parse_real(const std::string& s)
{
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    double x = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), x);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
        throw std::invalid_argument("not a real number: '" + s + "'");
    }
    return x;
}

/// Throws if the cell is not canonical for its column type.
inline void check_cell(const std::string& s, ColumnType t)
{
    if (s.empty() || t == ColumnType::text) {
        return;
    }
    switch (t) {
    case ColumnType::exact:
        if (cell(parse_rational(s)) != s) {
            throw std::invalid_argument("non-canonical rational '" + s + "'");
        }
        break;
    case ColumnType::integer: {
        BigInt z;
        if (z.set_str(s, 10) != 0 || z.get_str() != s) {
            throw std::invalid_argument("not an integer: '" + s + "'");
        }
        break;
    }
    case ColumnType::real:
        if (cell(parse_real(s)) != s) {
            throw std::invalid_argument("non-canonical real '" + s + "'");
        }
        break;
    case ColumnType::text: break;
    }
}

inline void validate(const OutputRecord& rec)
{
    for (const auto& row : rec.rows) {
        if (row.size() != rec.columns.size()) {
            throw std::invalid_argument("row has " + std::to_string(row.size()) + " cells, expected "
                                        + std::to_string(rec.columns.size()));
        }
        for (std::size_t j = 0; j < row.size(); ++j) {
            check_cell(row[j], rec.columns[j].type);
        }
    }
    for (const auto& note : rec.notes) {
        if (note.find_first_of("\r\n") != std::string::npos) {
            throw std::invalid_argument("notes must be single lines");
        }
    }
}

// ---------------------------------------------------------------------------
// CSV

namespace detail {

inline std::string csv_field(const std::string& s)
{
    if (s.find_first_of(",\"\r\n") == std::string::npos) {
        return s;
    }
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + '"';
}

inline void csv_line(std::ostream& os, const std::vector<std::string>& fields)
{
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) os << ',';
        os << csv_field(fields[i]);
    }
    os << '\n';
}

// Reads one RFC 4180 record. Returns false at end of input.
inline bool csv_record(std::istream& is, std::vector<std::string>& fields)
{
    fields.clear();
    if (is.peek() == std::char_traits<char>::eof()) {
        return false;
    }
    std::string field;
    bool quoted = false;
    char c;
    while (is.get(c)) {
        if (quoted) {
            if (c == '"') {
                if (is.peek() == '"') {
                    is.get(c);
                    field += '"';
                } else {
                    quoted = false;
                }
            } else {
                field += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(std::move(field));
            field.clear();
        } else if (c == '\n') {
            break;
        } else if (c != '\r') {
            field += c;
        }
    }
    if (quoted) {
        throw std::invalid_argument("csv: unterminated quoted field");
    }
    fields.push_back(std::move(field));
    return true;
}

} // namespace detail

inline void write_csv(std::ostream& os, const OutputRecord& rec)
{
    validate(rec);
    detail::csv_line(os, {"#meta", "command", rec.command});
    detail::csv_line(os, {"#meta", "version", rec.version});
    if (!rec.seed.empty()) {
        detail::csv_line(os, {"#meta", "seed", rec.seed});
    }
    for (const auto& [k, v] : rec.parameters) {
        detail::csv_line(os, {"#param", k, v});
    }
    for (const auto& note : rec.notes) {
        detail::csv_line(os, {"#note", note});
    }
    std::vector<std::string> types{"#types"}, names;
    for (const auto& c : rec.columns) {
        types.emplace_back(to_string(c.type));
        names.push_back(c.name);
    }
    detail::csv_line(os, types);
    detail::csv_line(os, names);
    for (const auto& row : rec.rows) {
        detail::csv_line(os, row);
    }
}

inline OutputRecord read_csv(std::istream& is)
{
    OutputRecord rec;
    std::vector<std::string> f;
    std::vector<ColumnType> types;
    bool have_types = false, have_header = false;
    while (detail::csv_record(is, f)) {
        if (!have_header && !f.empty() && f[0] == "#meta" && f.size() == 3) {
            if (f[1] == "command") rec.command = f[2];
            else if (f[1] == "version") rec.version = f[2];
            else if (f[1] == "seed") rec.seed = f[2];
            else throw std::invalid_argument("csv: unknown meta key '" + f[1] + "'");
        } else if (!have_header && !f.empty() && f[0] == "#param" && f.size() == 3) {
            rec.parameters.emplace_back(f[1], f[2]);
        } else if (!have_header && !f.empty() && f[0] == "#note" && f.size() == 2) {
            rec.notes.push_back(f[1]);
        } else if (!have_header && !f.empty() && f[0] == "#types") {
            for (std::size_t i = 1; i < f.size(); ++i) {
                types.push_back(parse_column_type(f[i]));
            }
            have_types = true;
        } else if (!have_header) {
            if (!have_types || f.size() != types.size()) {
                throw std::invalid_argument("csv: header does not match #types record");
            }
            for (std::size_t i = 0; i < f.size(); ++i) {
                rec.columns.push_back({f[i], types[i]});
            }
            have_header = true;
        } else {
            rec.rows.push_back(f);
        }
    }
    if (!have_header) {
        throw std::invalid_argument("csv: missing header");
    }
    validate(rec);
    return rec;
}

// ---------------------------------------------------------------------------
// JSON

using Json = nlohmann::ordered_json;

namespace detail {

inline Json json_cell(const std::string& s, ColumnType t)
{
    if (s.empty()) {
        return nullptr;
    }
    if (t == ColumnType::integer) {
        std::int64_t v = 0;
        const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
        if (res.ec == std::errc() && res.ptr == s.data() + s.size()) {
            return v;
        }
        return s;
    }
    if (t == ColumnType::real) {
        const double x = parse_real(s);
        if (std::isfinite(x)) {
            return x;
        }
    }
    return s;
}

inline std::string text_cell(const Json& j, ColumnType t)
{
    if (j.is_null()) return "";
    if (j.is_string()) return j.get<std::string>();
    if (j.is_number_integer()) {
        return t == ColumnType::real ? cell(j.get<double>()) : std::to_string(j.get<std::int64_t>());
    }
    if (j.is_number_unsigned()) {
        return t == ColumnType::real ? cell(j.get<double>()) : std::to_string(j.get<std::uint64_t>());
    }
    if (j.is_number_float()) return cell(j.get<double>());
    throw std::invalid_argument("json: unexpected cell " + j.dump());
}

} // namespace detail

inline Json to_json(const OutputRecord& rec)
{
    validate(rec);
    Json meta = Json::object();
    meta["command"] = rec.command;
    meta["version"] = rec.version;
    if (!rec.seed.empty()) {
        meta["seed"] = rec.seed;
    }
    Json params = Json::object();
    for (const auto& [k, v] : rec.parameters) {
        params[k] = v;
    }
    meta["parameters"] = params;
    meta["notes"] = rec.notes;
    Json cols = Json::array();
    for (const auto& c : rec.columns) {
        cols.push_back({{"name", c.name}, {"type", to_string(c.type)}});
    }
    Json rows = Json::array();
    for (const auto& row : rec.rows) {
        Json r = Json::array();
        for (std::size_t i = 0; i < row.size(); ++i) {
            r.push_back(detail::json_cell(row[i], rec.columns[i].type));
        }
        rows.push_back(std::move(r));
    }
    return Json{{"meta", meta}, {"columns", cols}, {"rows", rows}};
}

inline OutputRecord from_json(const Json& j)
{
    OutputRecord rec;
    const Json& meta = j.at("meta");
    rec.command = meta.at("command").get<std::string>();
    rec.version = meta.at("version").get<std::string>();
    if (meta.contains("seed")) {
        rec.seed = meta["seed"].get<std::string>();
    }
    for (const auto& [k, v] : meta.at("parameters").items()) {
        rec.parameters.emplace_back(k, v.get<std::string>());
    }
    rec.notes = meta.at("notes").get<std::vector<std::string>>();
    for (const auto& c : j.at("columns")) {
        rec.columns.push_back({c.at("name").get<std::string>(), parse_column_type(c.at("type").get<std::string>())});
    }
    for (const auto& r : j.at("rows")) {
        if (r.size() != rec.columns.size()) {
            throw std::invalid_argument("json: row width does not match columns");
        }
        Row row;
        for (std::size_t i = 0; i < r.size(); ++i) {
            row.push_back(detail::text_cell(r[i], rec.columns[i].type));
        }
        rec.rows.push_back(std::move(row));
    }
    validate(rec);
    return rec;
}

inline void write_json(std::ostream& os, const OutputRecord& rec) { os << to_json(rec).dump(2) << '\n'; }

inline OutputRecord read_json(std::istream& is) { return from_json(Json::parse(is)); }

inline void write(std::ostream& os, const OutputRecord& rec, Format f)
{
    f == Format::csv ? write_csv(os, rec) : write_json(os, rec);
}

inline OutputRecord read(std::istream& is, Format f) { return f == Format::csv ? read_csv(is) : read_json(is); }

inline std::string emit(const OutputRecord& rec, Format f)
{
    std::ostringstream os;
    write(os, rec, f);
    return os.str();
}

inline OutputRecord parse(const std::string& text, Format f)
{
    std::istringstream is(text);
    return read(is, f);
}

} // namespace rankdist::io
