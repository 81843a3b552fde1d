#pragma once

#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <system_error>
#include <utility>
#include <variant>
#include <vector>

#include <json.hpp>

#include "qpe/errors.hpp"
#include "qpe/version.hpp"

namespace qpe {

/// One table cell; std::monostate marks an absent value.
using Cell = std::variant<std::monostate, double, std::string, bool>;

inline Cell cell(std::optional<double> v) {
    return v ? Cell(*v) : Cell(std::monostate{});
}

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
    /// Emit JSON as a flat object instead of a row list (exactly one row).
    bool single_record = false;

    void add_row(std::vector<Cell> row) {
        if (row.size() != columns.size()) {
            throw InvalidParameter("row width does not match the header");
        }
        rows.push_back(std::move(row));
    }
};

struct Meta {
    std::string model;
    std::string command;
    std::vector<std::pair<std::string, Cell>> parameters;
};

enum class Format { csv, json };

struct OutputSpec {
    Format format = Format::csv;
    int precision = 12;
    std::string destination;  // empty: stdout
};

inline void validate(const OutputSpec &s) {
    if (s.precision < 6 || s.precision > 17) {
        throw InvalidParameter("precision must be in [6, 17]");
    }
}

/// Rounds to `precision` significant digits; -0 becomes 0.
inline double round_significant(double x, int precision) {
    if (!std::isfinite(x) || x == 0.0) {
        return x == 0.0 ? 0.0 : x;
    }
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::scientific, precision - 1);
    double y = 0.0;
    std::from_chars(buf, res.ptr, y);
    return y == 0.0 ? 0.0 : y;
}

/// Shortest round-trip text of x after rounding to `precision` digits.
inline std::string format_number(double x, int precision) {
    double y = round_significant(x, precision);
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, y);
    return std::string(buf, res.ptr);
}

namespace detail {

inline std::string csv_field(std::string_view s) {
    if (s.find_first_of(",\"\r\n") == std::string_view::npos) {
        return std::string(s);
    }
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') {
            out += '"';
        }
        out += c;
    }
    out += '"';
    return out;
}

inline std::string csv_cell(const Cell &c, int precision) {
    struct Visitor {
        int precision;
        std::string operator()(std::monostate) const { return {}; }
        std::string operator()(double d) const {
            return std::isfinite(d) ? format_number(d, precision) : std::string();
        }
        std::string operator()(const std::string &s) const { return csv_field(s); }
        std::string operator()(bool b) const { return b ? "true" : "false"; }
    };
    return std::visit(Visitor{precision}, c);
}

inline nlohmann::ordered_json json_cell(const Cell &c, int precision) {
    struct Visitor {
        int precision;
        nlohmann::ordered_json operator()(std::monostate) const { return nullptr; }
        nlohmann::ordered_json operator()(double d) const {
            if (!std::isfinite(d)) {
                return nullptr;
            }
            const double y = round_significant(d, precision);
            if (y == std::trunc(y) && std::fabs(y) < 9.0e15) {
                return static_cast<std::int64_t>(y);
            }
            return y;
        }
        nlohmann::ordered_json operator()(const std::string &s) const { return s; }
        nlohmann::ordered_json operator()(bool b) const { return b; }
    };
    return std::visit(Visitor{precision}, c);
}

}  // namespace detail

/// RFC 4180 with LF line endings; absent cells are empty fields.
inline void write_csv(std::ostream &os, const Table &t, const OutputSpec &opts) {
    validate(opts);
    for (std::size_t k = 0; k < t.columns.size(); ++k) {
        os << (k ? "," : "") << detail::csv_field(t.columns[k]);
    }
    os << '\n';
    for (const auto &row : t.rows) {
        for (std::size_t k = 0; k < row.size(); ++k) {
            os << (k ? "," : "") << detail::csv_cell(row[k], opts.precision);
        }
        os << '\n';
    }
}

/// One object: "meta" first, then either the single record's fields or "rows".
inline void write_json(std::ostream &os, const Table &t, const Meta &meta, const OutputSpec &opts) {
    validate(opts);
    nlohmann::ordered_json doc;
    nlohmann::ordered_json m;
    m["model"] = meta.model;
    m["command"] = meta.command;
    m["version"] = kVersion;
    nlohmann::ordered_json params = nlohmann::ordered_json::object();
    for (const auto &[k, v] : meta.parameters) {
        params[k] = detail::json_cell(v, opts.precision);
    }
    m["parameters"] = params;
    doc["meta"] = m;
    auto record = [&](const std::vector<Cell> &row) {
        nlohmann::ordered_json r = nlohmann::ordered_json::object();
        for (std::size_t k = 0; k < row.size(); ++k) {
            r[t.columns[k]] = detail::json_cell(row[k], opts.precision);
        }
        return r;
    };
    if (t.single_record && t.rows.size() == 1) {
        const nlohmann::ordered_json r = record(t.rows.front());
        for (auto it = r.begin(); it != r.end(); ++it) {
            doc[it.key()] = it.value();
        }
    } else {
        nlohmann::ordered_json rows = nlohmann::ordered_json::array();
        for (const auto &row : t.rows) {
            rows.push_back(record(row));
        }
        doc["rows"] = rows;
    }
    os << doc.dump(2) << '\n';
}

inline void write_table(std::ostream &os, const Table &t, const Meta &meta, const OutputSpec &opts) {
    if (opts.format == Format::csv) {
        write_csv(os, t, opts);
    } else {
        write_json(os, t, meta, opts);
    }
}

}  // namespace qpe
