#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace prindt {

/// Raw CSV contents: header row plus data records, all cells as text.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

// RFC-4180 style: comma separated, optional double-quoted fields with ""
// escapes, LF or CRLF record ends, header row mandatory. Every record must
// have the same field count as the header.
CsvTable parse_csv(std::string_view text);
CsvTable read_csv_file(const std::string& path);

// Quotes the field if it contains a comma, quote, or line break.
std::string csv_escape(std::string_view field);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, std::string_view contents);

// Shortest decimal representation that round-trips to the same double.
std::string format_double(double value);

} // namespace prindt
