#include "slampoint/csv.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace slampoint::csv {

std::size_t Table::find(const std::string& name) const {
    for (std::size_t i = 0; i < columns.size(); ++i)
        if (columns[i] == name) return i;
    return npos;
}

namespace {

// Splits one physical line; returns false at EOF. Quoted fields may span
// lines, in which case more input is pulled from the stream.
bool read_record(std::istream& in, char delim, std::vector<std::string>& out,
                 std::size_t& line_no) {
    out.clear();
    std::string line;
    if (!std::getline(in, line)) return false;
    ++line_no;

    std::string field;
    bool in_quotes = false;
    std::size_t i = 0;
    for (;;) {
        if (i >= line.size()) {
            if (in_quotes) {
                // embedded newline inside a quoted field
                if (!std::getline(in, line)) throw MalformedRow(line_no, "unterminated quote");
                ++line_no;
                field.push_back('\n');
                i = 0;
                continue;
            }
            break;
        }
        char c = line[i];
        if (in_quotes) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    field.push_back('"');
                    ++i;
                } else {
                    in_quotes = false;
                }
            } else {
                field.push_back(c);
            }
        } else if (c == '"' && field.empty()) {
            in_quotes = true;
        } else if (c == delim) {
            out.push_back(std::move(field));
            field.clear();
        } else if (c == '\r' && i + 1 == line.size()) {
            // trailing CR from CRLF input
        } else {
            field.push_back(c);
        }
        ++i;
    }
    out.push_back(std::move(field));
    return true;
}

}  // namespace

Table read_table(std::istream& in, const Dialect& dialect) {
    Table table;
    std::size_t line_no = 0;
    std::vector<std::string> record;
    if (!read_record(in, dialect.delimiter, record, line_no))
        throw MalformedRow(1, "missing header row");
    table.columns = record;

    while (read_record(in, dialect.delimiter, record, line_no)) {
        if (record.size() == 1 && record[0].empty()) continue;  // blank line
        if (record.size() != table.columns.size())
            throw MalformedRow(line_no, "expected " + std::to_string(table.columns.size()) +
                                            " fields, got " + std::to_string(record.size()));
        table.rows.push_back(record);
    }
    return table;
}

Table read_table_file(const std::string& path, const Dialect& dialect) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    return read_table(in, dialect);
}

std::string encode_field(const std::string& field, char delimiter) {
    bool needs_quotes = field.find(delimiter) != std::string::npos ||
                        field.find('"') != std::string::npos ||
                        field.find('\n') != std::string::npos;
    if (!needs_quotes) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += "\"\"";
        else out.push_back(c);
    }
    out += "\"";
    return out;
}

void write_table(std::ostream& out, const Table& table, const Dialect& dialect) {
    auto write_row = [&](const std::vector<std::string>& row) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out << dialect.delimiter;
            out << encode_field(row[i], dialect.delimiter);
        }
        out << "\n";
    };
    write_row(table.columns);
    for (const auto& row : table.rows) write_row(row);
}

}  // namespace slampoint::csv
