#pragma once

#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

namespace optpay {

/// Small column-named table used for every CSV/JSON artifact. Cells are
/// numbers or strings; numbers are written with 12 significant digits.
class Table {
public:
    using Cell = std::variant<double, std::string>;

    Table() = default;
    explicit Table(std::vector<std::string> columns);

    void add_row(std::vector<Cell> row);
    /// Free-form provenance lines (written as `# ...` in CSV, "provenance" in JSON).
    void add_note(std::string note) { notes_.push_back(std::move(note)); }

    const std::vector<std::string>& columns() const { return columns_; }
    const std::vector<std::vector<Cell>>& rows() const { return rows_; }
    const std::vector<std::string>& notes() const { return notes_; }
    std::size_t size() const { return rows_.size(); }

    /// Index of a column; throws DomainError if absent.
    std::size_t index(const std::string& name) const;
    /// Numeric column; throws DomainError on a string cell.
    std::vector<double> column(const std::string& name) const;
    double number(std::size_t row, const std::string& name) const;
    std::string text(std::size_t row, const std::string& name) const;

private:
    std::vector<std::string> columns_;
    std::vector<std::vector<Cell>> rows_;
    std::vector<std::string> notes_;
};

/// 12-significant-digit rendering shared by the CSV and JSON writers.
std::string format_number(double x);

void write_csv(std::ostream& out, const Table& table);
void write_json(std::ostream& out, const Table& table);
/// Parses what write_csv produces: `#` lines become notes, the first other
/// line is the header, fields that parse fully as numbers become numbers.
/// Double-quoted fields with embedded commas or quotes are supported.
Table read_csv(std::istream& in);
Table read_json(std::istream& in);

}  // namespace optpay
