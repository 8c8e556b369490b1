#include "stochmech/core/table.hpp"

#include "stochmech/core/errors.hpp"

#include <algorithm>
#include <charconv>
#include <istream>
#include <limits>

namespace stochmech {

namespace {

std::vector<std::string> split(const std::string& line)
{
    std::vector<std::string> cells;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        cells.push_back(line.substr(start, comma - start));
        if (comma == std::string::npos)
            return cells;
        start = comma + 1;
    }
}

}  // namespace

std::size_t CsvTable::column(const std::string& name) const
{
    const auto it = std::find(columns.begin(), columns.end(), name);
    if (it == columns.end())
        throw DomainError("csv", "no column '" + name + "'");
    return static_cast<std::size_t>(it - columns.begin());
}

const std::string& CsvTable::text(std::size_t row, const std::string& name) const
{
    if (row >= rows.size())
        throw DomainError("csv", "row " + std::to_string(row) + " out of range");
    return rows[row][column(name)];
}

double CsvTable::number(std::size_t row, const std::string& name) const
{
    const std::string& cell = text(row, name);
    if (cell.empty())
        return std::numeric_limits<double>::quiet_NaN();
    double v = 0.0;
    const auto [end, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
    if (ec != std::errc() || end != cell.data() + cell.size())
        throw DomainError("csv", "cell '" + cell + "' in column '" + name + "' is not a number");
    return v;
}

CsvTable read_table_csv(std::istream& in)
{
    CsvTable t;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.empty())
            continue;
        auto cells = split(line);
        if (t.columns.empty()) {
            t.columns = std::move(cells);
            continue;
        }
        if (cells.size() != t.columns.size())
            throw DomainError("csv", "line " + std::to_string(line_no) + " has " + std::to_string(cells.size()) +
                                         " cells, expected " + std::to_string(t.columns.size()));
        t.rows.push_back(std::move(cells));
    }
    if (t.columns.empty())
        throw DomainError("csv", "missing header");
    return t;
}

}  // namespace stochmech
