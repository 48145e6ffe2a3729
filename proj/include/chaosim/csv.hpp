#pragma once

#include <string>
#include <variant>

#include "chaosim/table.hpp"
#include "chaosim/util.hpp"

namespace chaosim {

inline std::string format_cell(const Cell& cell) {
    if (std::holds_alternative<long long>(cell))
        return std::to_string(std::get<long long>(cell));
    if (std::holds_alternative<double>(cell)) return format_real(std::get<double>(cell));
    return std::get<std::string>(cell);
}

inline std::string csv_string(const Table& table) {
    std::string out;
    for (std::size_t i = 0; i < table.columns.size(); ++i) {
        if (i) out += ',';
        out += table.columns[i];
    }
    out += '\n';
    for (const auto& row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out += ',';
            out += format_cell(row[i]);
        }
        out += '\n';
    }
    return out;
}

/// Header row then data rows; comma separated, single newline, reals with 17
/// significant digits. Written atomically.
inline void emit_csv(const Table& table, const std::string& path) {
    write_file_atomic(path, csv_string(table));
}

} // namespace chaosim
