#pragma once

#include <initializer_list>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace chaosim {

using Cell = std::variant<long long, double, std::string>;

/// Column-named rows, the common carrier between simulators and emitters.
struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;

    explicit Table(std::vector<std::string> cols = {}) : columns(std::move(cols)) {
        for (std::size_t i = 0; i < columns.size(); ++i)
            for (std::size_t j = i + 1; j < columns.size(); ++j)
                if (columns[i] == columns[j])
                    throw std::invalid_argument("Table: duplicate column " + columns[i]);
    }

    void add_row(std::vector<Cell> row) {
        if (row.size() != columns.size())
            throw std::invalid_argument("Table: row width does not match columns");
        rows.push_back(std::move(row));
    }

    int column_index(const std::string& name) const {
        for (std::size_t i = 0; i < columns.size(); ++i)
            if (columns[i] == name) return static_cast<int>(i);
        return -1;
    }

    // Numeric view of a column; integer cells widen to double.
    std::vector<double> numeric_column(const std::string& name) const {
        const int idx = column_index(name);
        if (idx < 0) throw std::invalid_argument("Table: no such column " + name);
        std::vector<double> out;
        out.reserve(rows.size());
        for (const auto& row : rows) {
            const Cell& cell = row[static_cast<std::size_t>(idx)];
            if (std::holds_alternative<double>(cell))
                out.push_back(std::get<double>(cell));
            else if (std::holds_alternative<long long>(cell))
                out.push_back(static_cast<double>(std::get<long long>(cell)));
            else
                throw std::invalid_argument("Table: column " + name + " is not numeric");
        }
        return out;
    }
};

} // namespace chaosim
