#pragma once

#include <cstddef>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "revsent/error.hpp"

// Minimal RFC 4180 reader/writer. Fields are quoted only when they contain
// a comma, a double quote, CR or LF; records end with CRLF on output and
// either CRLF or LF on input.
namespace revsent::csv {

using Row = std::vector<std::string>;

inline bool needs_quoting(std::string_view field) {
    return field.find_first_of(",\"\r\n") != std::string_view::npos;
}

inline void append_field(std::string& out, std::string_view field) {
    if (!needs_quoting(field)) {
        out.append(field);
        return;
    }
    out.push_back('"');
    for (char c : field) {
        if (c == '"') out.push_back('"');
        out.push_back(c);
    }
    out.push_back('"');
}

inline std::string format_row(const Row& row) {
    std::string out;
    for (std::size_t i = 0; i < row.size(); ++i) {
        if (i) out.push_back(',');
        append_field(out, row[i]);
    }
    out.append("\r\n");
    return out;
}

/// Parses a whole document. Throws ParseError naming the 1-based record.
inline std::vector<Row> parse(std::string_view text) {
    std::vector<Row> rows;
    Row row;
    std::string field;
    std::size_t record = 1;
    std::size_t i = 0;
    const std::size_t n = text.size();
    bool row_open = false;

    auto end_field = [&] {
        row.push_back(std::move(field));
        field.clear();
    };
    auto end_row = [&] {
        end_field();
        rows.push_back(std::move(row));
        row.clear();
        row_open = false;
        ++record;
    };

    while (i < n) {
        row_open = true;
        if (text[i] == '"') {
            ++i;
            bool closed = false;
            while (i < n) {
                if (text[i] == '"') {
                    if (i + 1 < n && text[i + 1] == '"') {
                        field.push_back('"');
                        i += 2;
                    } else {
                        ++i;
                        closed = true;
                        break;
                    }
                } else {
                    field.push_back(text[i++]);
                }
            }
            if (!closed) throw ParseError("unterminated quoted field in record " + std::to_string(record));
            if (i < n && text[i] != ',' && text[i] != '\r' && text[i] != '\n')
                throw ParseError("unexpected character after closing quote in record " +
                                 std::to_string(record));
        }
        // Unquoted remainder of the field up to the next delimiter.
        while (i < n && text[i] != ',' && text[i] != '\r' && text[i] != '\n') {
            if (text[i] == '"')
                throw ParseError("bare double quote in unquoted field in record " + std::to_string(record));
            field.push_back(text[i++]);
        }
        if (i >= n) break;
        if (text[i] == ',') {
            end_field();
            ++i;
            if (i == n) row_open = true;
            continue;
        }
        if (text[i] == '\r') {
            ++i;
            if (i < n && text[i] == '\n') ++i;
        } else {
            ++i;
        }
        end_row();
    }
    if (row_open) end_row();
    return rows;
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError(path, "cannot open file for reading");
    std::ostringstream ss;
    ss << in.rdbuf();
    if (in.bad()) throw IoError(path, "read failure");
    return ss.str();
}

inline std::vector<Row> read_file_rows(const std::string& path) { return parse(read_file(path)); }

inline void write_file(const std::string& path, std::string_view bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError(path, "cannot open file for writing");
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    out.flush();
    if (!out) throw IoError(path, "write failure");
}

/// Index of a named header column, or npos.
inline std::size_t column_index(const Row& header, std::string_view name) {
    for (std::size_t i = 0; i < header.size(); ++i)
        if (header[i] == name) return i;
    return static_cast<std::size_t>(-1);
}

}  // namespace revsent::csv
