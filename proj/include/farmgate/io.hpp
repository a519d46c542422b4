#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "farmgate/data_model.hpp"
#include "farmgate/policy.hpp"
#include "farmgate/translog.hpp"

namespace farmgate {

// ---- panel files -----------------------------------------------------

// `item,kind,year,price,quantity` with kind in {input, output}.
RawPanel read_panel_csv(const std::filesystem::path& path);

struct PanelMetadata {
    std::string currency = "unspecified";
    std::string quantity_unit = "unspecified";
    std::optional<int> base_year;
};

// Optional sidecar `<panel>.meta` in key=value form.
PanelMetadata read_panel_metadata(const std::filesystem::path& panel_path);

// ---- cost observations -----------------------------------------------

// `obs_id,total_cost,output_level` plus `price_<item>,share_<item>` pairs;
// optional `quantity_<item>` columns trigger the share reconstruction check.
CostDataset read_cost_observations_csv(const std::filesystem::path& path);

// ---- fitted coefficients ----------------------------------------------

std::string coefficients_to_json(const FitReport& report);
TranslogCoefficients coefficients_from_json_file(
    const std::filesystem::path& path);

// ---- key=value configs -------------------------------------------------

struct ConfigSection {
    std::string type;  // e.g. "item", "crop"
    std::string name;
    std::vector<std::pair<std::string, std::string>> entries;

    std::optional<std::string> get(const std::string& key) const;
    std::string require(const std::string& key,
                        const std::string& where) const;
};

struct ConfigFile {
    ConfigSection top;  // entries before the first [section]
    std::vector<ConfigSection> sections;
    std::filesystem::path source;
};

ConfigFile read_config(const std::filesystem::path& path);

PolicyScenario scenario_from_config(const ConfigFile& config);
PolicyScenario read_scenario_file(const std::filesystem::path& path);

// ---- output helpers ----------------------------------------------------

// Writes via a temp file in the target directory plus rename, so failed
// runs never leave a truncated output. `path` == "-" streams to stdout.
void write_text_atomic(const std::filesystem::path& path,
                       const std::string& content);

// FNV-1a 64-bit digest of a file's bytes, as "fnv1a64:<hex>".
std::string file_digest(const std::filesystem::path& path);

}  // namespace farmgate
