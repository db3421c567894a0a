#include "core/csv.hpp"

#include "core/error.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace prindt {

namespace {

// Splits one record starting at pos. Returns false at end of input.
bool next_record(std::string_view text, std::size_t& pos, std::vector<std::string>& out,
                 std::size_t record_no) {
    out.clear();
    if (pos >= text.size()) return false;

    std::string field;
    bool in_quotes = false;
    bool quoted_field = false;

    for (;;) {
        if (pos >= text.size()) {
            if (in_quotes)
                fail(ErrorCode::parse, "unterminated quoted field in CSV record " + std::to_string(record_no));
            out.push_back(std::move(field));
            return true;
        }
        const char c = text[pos];
        if (in_quotes) {
            if (c == '"') {
                if (pos + 1 < text.size() && text[pos + 1] == '"') {
                    field.push_back('"');
                    pos += 2;
                } else {
                    in_quotes = false;
                    ++pos;
                }
            } else {
                field.push_back(c);
                ++pos;
            }
            continue;
        }
        switch (c) {
        case '"':
            if (!field.empty() || quoted_field)
                fail(ErrorCode::parse, "stray quote in CSV record " + std::to_string(record_no));
            in_quotes = true;
            quoted_field = true;
            ++pos;
            break;
        case ',':
            out.push_back(std::move(field));
            field.clear();
            quoted_field = false;
            ++pos;
            break;
        case '\r':
            if (pos + 1 < text.size() && text[pos + 1] == '\n') {
                out.push_back(std::move(field));
                pos += 2;
                return true;
            }
            field.push_back(c);
            ++pos;
            break;
        case '\n':
            out.push_back(std::move(field));
            ++pos;
            return true;
        default:
            field.push_back(c);
            ++pos;
        }
    }
}

} // namespace

CsvTable parse_csv(std::string_view text) {
    CsvTable table;
    std::size_t pos = 0;
    std::vector<std::string> record;

    if (!next_record(text, pos, record, 1) || (record.size() == 1 && record[0].empty()))
        fail(ErrorCode::parse, "CSV input has no header row");
    table.header = std::move(record);

    std::size_t record_no = 1;
    while (next_record(text, pos, record, record_no + 1)) {
        ++record_no;
        if (record.size() == 1 && record[0].empty()) continue; // trailing blank line
        if (record.size() != table.header.size())
            fail(ErrorCode::parse, "CSV record " + std::to_string(record_no) + " has " +
                                       std::to_string(record.size()) + " fields, expected " +
                                       std::to_string(table.header.size()));
        table.rows.push_back(std::move(record));
    }
    return table;
}

CsvTable read_csv_file(const std::string& path) {
    return parse_csv(read_text_file(path));
}

std::string csv_escape(std::string_view field) {
    const bool needs_quotes = field.find_first_of(",\"\r\n") != std::string_view::npos;
    if (!needs_quotes) return std::string(field);
    std::string out;
    out.reserve(field.size() + 2);
    out.push_back('"');
    for (char c : field) {
        if (c == '"') out.push_back('"');
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorCode::io, "cannot open file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    if (in.bad()) fail(ErrorCode::io, "error reading file: " + path);
    return std::move(buf).str();
}

void write_text_file(const std::string& path, std::string_view contents) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) fail(ErrorCode::io, "cannot open file for writing: " + path);
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!out) fail(ErrorCode::io, "error writing file: " + path);
}

std::string format_double(double value) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, res.ptr);
}

} // namespace prindt
