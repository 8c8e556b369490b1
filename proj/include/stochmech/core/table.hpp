#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace stochmech {

/// A comma-separated table with a header row; cells are kept as text.
struct CsvTable {
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;

    std::size_t column(const std::string& name) const;
    const std::string& text(std::size_t row, const std::string& name) const;
    /// The cell as a number; an empty cell reads as NaN.
    double number(std::size_t row, const std::string& name) const;
};

/// Reads any of the emitted tables (eigenvalues, comparisons, ...). Every row
/// must have as many cells as the header.
CsvTable read_table_csv(std::istream& in);

}  // namespace stochmech
