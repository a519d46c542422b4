#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "farmgate/errors.hpp"

namespace farmgate {

// Minimal comma-separated tables: header row plus data rows, no quoting.
// Parsing is locale-independent; numeric fields accept a decimal point
// only and reject currency symbols or thousands separators.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    std::size_t column(const std::string& name,
                       const std::string& path_for_error) const;
};

CsvTable read_csv(const std::filesystem::path& path);

double parse_number(const std::string& text, const std::string& where);
int parse_int(const std::string& text, const std::string& where);

}  // namespace farmgate
