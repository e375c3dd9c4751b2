#pragma once

// Minimal delimited-text reader/writer. Header-first files, configurable
// delimiter, RFC-4180 style quoting on both ends.

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace slampoint::csv {

struct Dialect {
    char delimiter = ',';
};

struct MalformedRow : std::runtime_error {
    MalformedRow(std::size_t line, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line_no(line) {}
    std::size_t line_no;
};

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;

    // Index of a column, or npos.
    static constexpr std::size_t npos = static_cast<std::size_t>(-1);
    std::size_t find(const std::string& name) const;
};

// Reads the whole stream. Every data row must match the header arity;
// a short or long row raises MalformedRow with its 1-based line number.
Table read_table(std::istream& in, const Dialect& dialect = {});
Table read_table_file(const std::string& path, const Dialect& dialect = {});

// Fields are quoted only when they contain the delimiter, a quote or a
// newline, so plain numeric data round-trips byte-identically.
void write_table(std::ostream& out, const Table& table, const Dialect& dialect = {});

std::string encode_field(const std::string& field, char delimiter);

}  // namespace slampoint::csv
