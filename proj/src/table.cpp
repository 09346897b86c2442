#include "optpay/table.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <json.hpp>
#include <ostream>

#include "optpay/errors.hpp"

namespace optpay {

namespace {

std::string quote_if_needed(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                cur += '"';
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                cur += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(std::move(cur));
            cur.clear();
        } else if (c != '\r') {
            cur += c;
        }
    }
    if (quoted) throw DomainError("csv: unterminated quoted field");
    fields.push_back(std::move(cur));
    return fields;
}

Table::Cell parse_cell(const std::string& s) {
    if (s.empty()) return s;
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (end == s.c_str() + s.size()) return v;
    return s;
}

double rounded(double x) {
    if (!std::isfinite(x)) return x;
    return std::strtod(format_number(x).c_str(), nullptr);
}

}  // namespace

Table::Table(std::vector<std::string> columns) : columns_(std::move(columns)) {}

void Table::add_row(std::vector<Cell> row) {
    if (row.size() != columns_.size()) throw DomainError("table: row width does not match header");
    rows_.push_back(std::move(row));
}

std::size_t Table::index(const std::string& name) const {
    for (std::size_t i = 0; i < columns_.size(); ++i) {
        if (columns_[i] == name) return i;
    }
    throw DomainError("table: no column named '" + name + "'");
}

std::vector<double> Table::column(const std::string& name) const {
    std::vector<double> out;
    out.reserve(rows_.size());
    for (std::size_t r = 0; r < rows_.size(); ++r) out.push_back(number(r, name));
    return out;
}

double Table::number(std::size_t row, const std::string& name) const {
    const auto& cell = rows_.at(row).at(index(name));
    if (const auto* d = std::get_if<double>(&cell)) return *d;
    throw DomainError("table: column '" + name + "' holds text at row " + std::to_string(row));
}

std::string Table::text(std::size_t row, const std::string& name) const {
    const auto& cell = rows_.at(row).at(index(name));
    if (const auto* s = std::get_if<std::string>(&cell)) return *s;
    return format_number(std::get<double>(cell));
}

std::string format_number(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

void write_csv(std::ostream& out, const Table& table) {
    for (const auto& n : table.notes()) out << "# " << n << '\n';
    for (std::size_t i = 0; i < table.columns().size(); ++i) {
        out << (i ? "," : "") << quote_if_needed(table.columns()[i]);
    }
    out << '\n';
    for (const auto& row : table.rows()) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out << ',';
            if (const auto* d = std::get_if<double>(&row[i])) {
                out << format_number(*d);
            } else {
                out << quote_if_needed(std::get<std::string>(row[i]));
            }
        }
        out << '\n';
    }
}

void write_json(std::ostream& out, const Table& table) {
    nlohmann::ordered_json doc;
    doc["provenance"] = table.notes();
    doc["columns"] = table.columns();
    auto rows = nlohmann::ordered_json::array();
    for (const auto& row : table.rows()) {
        nlohmann::ordered_json obj;
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (const auto* d = std::get_if<double>(&row[i])) {
                obj[table.columns()[i]] = rounded(*d);
            } else {
                obj[table.columns()[i]] = std::get<std::string>(row[i]);
            }
        }
        rows.push_back(std::move(obj));
    }
    doc["rows"] = std::move(rows);
    out << doc.dump(2) << '\n';
}

Table read_csv(std::istream& in) {
    Table table;
    std::vector<std::string> notes;
    std::string line;
    bool have_header = false;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line[0] == '#') {
            notes.push_back(line.size() > 2 && line[1] == ' ' ? line.substr(2) : line.substr(1));
            continue;
        }
        auto fields = split_csv_line(line);
        if (!have_header) {
            table = Table(std::move(fields));
            have_header = true;
            continue;
        }
        std::vector<Table::Cell> row;
        row.reserve(fields.size());
        for (const auto& f : fields) row.push_back(parse_cell(f));
        table.add_row(std::move(row));
    }
    if (!have_header) throw DomainError("csv: missing header row");
    for (auto& n : notes) table.add_note(std::move(n));
    return table;
}

Table read_json(std::istream& in) {
    const auto doc = nlohmann::json::parse(in);
    Table table(doc.at("columns").get<std::vector<std::string>>());
    for (const auto& obj : doc.at("rows")) {
        std::vector<Table::Cell> row;
        for (const auto& c : table.columns()) {
            const auto& v = obj.at(c);
            if (v.is_number()) {
                row.emplace_back(v.get<double>());
            } else {
                row.emplace_back(v.get<std::string>());
            }
        }
        table.add_row(std::move(row));
    }
    if (doc.contains("provenance")) {
        for (const auto& n : doc["provenance"]) table.add_note(n.get<std::string>());
    }
    return table;
}

}  // namespace optpay
