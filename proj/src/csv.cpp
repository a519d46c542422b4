#include "farmgate/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>

namespace farmgate {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> fields;
    std::string current;
    for (char ch : line) {
        if (ch == ',') {
            fields.push_back(trim(current));
            current.clear();
        } else {
            current.push_back(ch);
        }
    }
    fields.push_back(trim(current));
    return fields;
}

}  // namespace

std::size_t CsvTable::column(const std::string& name,
                             const std::string& path_for_error) const {
    for (std::size_t i = 0; i < header.size(); ++i)
        if (header[i] == name) return i;
    throw ParseError(Errc::parse_error,
                     path_for_error + ": missing column '" + name + "'");
}

CsvTable read_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw IoError(Errc::io_failure, "cannot open " + path.string());
    CsvTable table;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string stripped = trim(line);
        if (stripped.empty()) continue;
        auto fields = split_fields(stripped);
        if (table.header.empty()) {
            table.header = std::move(fields);
            continue;
        }
        if (fields.size() != table.header.size())
            throw ParseError(Errc::parse_error,
                             path.string() + ":" + std::to_string(lineno) +
                                 ": expected " +
                                 std::to_string(table.header.size()) +
                                 " fields, got " + std::to_string(fields.size()));
        table.rows.push_back(std::move(fields));
    }
    if (table.header.empty())
        throw ParseError(Errc::parse_error, path.string() + ": empty file");
    return table;
}

double parse_number(const std::string& text, const std::string& where) {
    double value = 0.0;
    const char* begin = text.data();
    const char* end = begin + text.size();
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc() || ptr != end || !std::isfinite(value))
        throw ParseError(Errc::parse_error,
                         where + ": '" + text + "' is not a finite number");
    return value;
}

int parse_int(const std::string& text, const std::string& where) {
    int value = 0;
    const char* begin = text.data();
    const char* end = begin + text.size();
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc() || ptr != end)
        throw ParseError(Errc::parse_error,
                         where + ": '" + text + "' is not an integer");
    return value;
}

}  // namespace farmgate
