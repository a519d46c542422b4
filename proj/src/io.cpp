#include "farmgate/io.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>

#include "farmgate/csv.hpp"
#include "farmgate/numeric.hpp"

namespace farmgate {

namespace {

using ordered_json = nlohmann::ordered_json;

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double json_round(double v) { return round_sig(v, 12); }

}  // namespace

RawPanel read_panel_csv(const std::filesystem::path& path) {
    const CsvTable table = read_csv(path);
    const std::string p = path.string();
    const std::size_t c_item = table.column("item", p);
    const std::size_t c_kind = table.column("kind", p);
    const std::size_t c_year = table.column("year", p);
    const std::size_t c_price = table.column("price", p);
    const std::size_t c_qty = table.column("quantity", p);

    RawPanel raw;
    struct Cell {
        std::size_t item;
        int year;
        double price;
        double quantity;
    };
    std::vector<Cell> cells;
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const auto& row = table.rows[r];
        const std::string where = p + ":" + std::to_string(r + 2);
        const std::string& name = row[c_item];
        const std::string& kind_text = row[c_kind];
        ItemKind kind;
        if (kind_text == "input")
            kind = ItemKind::Input;
        else if (kind_text == "output")
            kind = ItemKind::Output;
        else
            throw ParseError(Errc::parse_error,
                             where + ": kind must be 'input' or 'output', got '" +
                                 kind_text + "'");

        std::size_t item_idx = raw.items.size();
        for (std::size_t i = 0; i < raw.items.size(); ++i)
            if (raw.items[i].name == name) {
                item_idx = i;
                if (raw.items[i].kind != kind)
                    throw ParseError(Errc::parse_error,
                                     where + ": item '" + name +
                                         "' switches kind mid-file");
                break;
            }
        if (item_idx == raw.items.size()) raw.items.push_back({name, kind});

        cells.push_back({item_idx, parse_int(row[c_year], where),
                         parse_number(row[c_price], where),
                         parse_number(row[c_qty], where)});
    }

    for (const Cell& cell : cells) {
        bool known = false;
        for (int y : raw.years) known = known || y == cell.year;
        if (!known) raw.years.push_back(cell.year);
    }
    std::sort(raw.years.begin(), raw.years.end());

    raw.resize_cells();
    for (const Cell& cell : cells) {
        std::size_t t = 0;
        while (raw.years[t] != cell.year) ++t;
        if (!std::isnan(raw.price_at(cell.item, t)))
            throw ParseError(Errc::parse_error,
                             p + ": duplicate row for item '" +
                                 raw.items[cell.item].name + "', year " +
                                 std::to_string(cell.year));
        raw.price_at(cell.item, t) = cell.price;
        raw.quantity_at(cell.item, t) = cell.quantity;
    }
    return raw;
}

PanelMetadata read_panel_metadata(const std::filesystem::path& panel_path) {
    PanelMetadata meta;
    std::filesystem::path side = panel_path;
    side += ".meta";
    std::ifstream in(side);
    if (!in) return meta;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string stripped = trim(line);
        if (stripped.empty() || stripped[0] == '#') continue;
        const std::size_t eq = stripped.find('=');
        if (eq == std::string::npos)
            throw ParseError(Errc::parse_error,
                             side.string() + ":" + std::to_string(lineno) +
                                 ": expected key=value");
        const std::string key = trim(stripped.substr(0, eq));
        const std::string value = trim(stripped.substr(eq + 1));
        if (key == "currency")
            meta.currency = value;
        else if (key == "quantity_unit")
            meta.quantity_unit = value;
        else if (key == "base_year")
            meta.base_year = parse_int(value, side.string());
        // unknown keys pass through silently
    }
    return meta;
}

CostDataset read_cost_observations_csv(const std::filesystem::path& path) {
    const CsvTable table = read_csv(path);
    const std::string p = path.string();
    const std::size_t c_cost = table.column("total_cost", p);
    const std::size_t c_output = table.column("output_level", p);

    std::vector<std::string> inputs;
    std::vector<std::size_t> price_cols, share_cols;
    std::vector<std::optional<std::size_t>> qty_cols;
    for (std::size_t i = 0; i < table.header.size(); ++i) {
        const std::string& h = table.header[i];
        if (h.rfind("price_", 0) == 0) {
            const std::string name = h.substr(6);
            inputs.push_back(name);
            price_cols.push_back(i);
            share_cols.push_back(table.column("share_" + name, p));
            std::optional<std::size_t> qcol;
            for (std::size_t j = 0; j < table.header.size(); ++j)
                if (table.header[j] == "quantity_" + name) qcol = j;
            qty_cols.push_back(qcol);
        }
    }
    if (inputs.empty())
        throw ParseError(Errc::parse_error, p + ": no price_<item> columns");

    const bool any_qty =
        std::any_of(qty_cols.begin(), qty_cols.end(),
                    [](const auto& q) { return q.has_value(); });
    if (any_qty &&
        !std::all_of(qty_cols.begin(), qty_cols.end(),
                     [](const auto& q) { return q.has_value(); }))
        throw ParseError(Errc::parse_error,
                         p + ": quantity_<item> columns must cover all inputs");

    std::vector<CostObservation> observations;
    std::vector<std::vector<double>> quantities;
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const auto& row = table.rows[r];
        const std::string where = p + ":" + std::to_string(r + 2);
        std::vector<double> prices, shares, qty;
        for (std::size_t i = 0; i < inputs.size(); ++i) {
            prices.push_back(parse_number(row[price_cols[i]], where));
            shares.push_back(parse_number(row[share_cols[i]], where));
            if (any_qty) qty.push_back(parse_number(row[*qty_cols[i]], where));
        }
        observations.push_back(
            CostObservation{parse_number(row[c_cost], where), std::move(prices),
                            parse_number(row[c_output], where),
                            ShareVector::validated(inputs, std::move(shares))});
        if (any_qty) quantities.push_back(std::move(qty));
    }
    return make_cost_dataset(std::move(inputs), std::move(observations),
                             any_qty ? &quantities : nullptr);
}

std::string coefficients_to_json(const FitReport& report) {
    const TranslogCoefficients& c = report.coefficients;
    ordered_json j;
    j["inputs"] = c.inputs();
    j["numeraire"] = c.numeraire();
    j["alpha0"] = json_round(c.alpha0());
    ordered_json ai;
    for (std::size_t i = 0; i < c.input_count(); ++i)
        ai[c.inputs()[i]] = json_round(c.alpha_i(i));
    j["alpha_i"] = ai;
    j["alpha_y"] = json_round(c.alpha_y());
    ordered_json aij = ordered_json::array();
    for (std::size_t i = 0; i < c.input_count(); ++i) {
        ordered_json row = ordered_json::array();
        for (std::size_t k = 0; k < c.input_count(); ++k)
            row.push_back(json_round(c.alpha_ij(i, k)));
        aij.push_back(row);
    }
    j["alpha_ij"] = aij;
    j["alpha_yy"] = json_round(c.alpha_yy());
    ordered_json aiy;
    for (std::size_t i = 0; i < c.input_count(); ++i)
        aiy[c.inputs()[i]] = json_round(c.alpha_iy(i));
    j["alpha_iy"] = aiy;

    ordered_json fit_block;
    fit_block["iterations_used"] = report.iterations_used;
    fit_block["converged"] = report.converged;
    ordered_json rv;
    for (std::size_t g = 0; g < report.equation_labels.size(); ++g)
        rv[report.equation_labels[g]] =
            json_round(report.residual_variance_per_equation[g]);
    fit_block["residual_variance_per_equation"] = rv;
    fit_block["sample_size"] = report.sample_size;
    fit_block["dropped_share_equation"] = report.dropped_share_equation;
    j["fit"] = fit_block;
    return j.dump(2) + "\n";
}

TranslogCoefficients coefficients_from_json_file(
    const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw IoError(Errc::io_failure, "cannot open " + path.string());
    ordered_json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw ParseError(Errc::parse_error,
                         path.string() + ": invalid JSON: " + e.what());
    }
    try {
        const std::vector<std::string> inputs =
            j.at("inputs").get<std::vector<std::string>>();
        const std::string numeraire = j.at("numeraire").get<std::string>();
        const std::size_t n = inputs.size();
        std::vector<double> alpha_i, alpha_iy;
        for (const std::string& name : inputs) {
            alpha_i.push_back(j.at("alpha_i").at(name).get<double>());
            alpha_iy.push_back(j.at("alpha_iy").at(name).get<double>());
        }
        Eigen::MatrixXd alpha_ij(static_cast<Eigen::Index>(n),
                                 static_cast<Eigen::Index>(n));
        const auto& rows = j.at("alpha_ij");
        if (rows.size() != n)
            throw ParseError(Errc::parse_error,
                             path.string() + ": alpha_ij must be " +
                                 std::to_string(n) + "x" + std::to_string(n));
        for (std::size_t i = 0; i < n; ++i) {
            if (rows[i].size() != n)
                throw ParseError(Errc::parse_error,
                                 path.string() + ": ragged alpha_ij");
            for (std::size_t k = 0; k < n; ++k)
                alpha_ij(static_cast<Eigen::Index>(i),
                         static_cast<Eigen::Index>(k)) = rows[i][k].get<double>();
        }
        return TranslogCoefficients::from_checked(
            inputs, numeraire, j.at("alpha0").get<double>(), std::move(alpha_i),
            j.at("alpha_y").get<double>(), std::move(alpha_ij),
            j.at("alpha_yy").get<double>(), std::move(alpha_iy));
    } catch (const ordered_json::exception& e) {
        throw ParseError(Errc::parse_error,
                         path.string() + ": bad coefficient file: " + e.what());
    }
}

std::optional<std::string> ConfigSection::get(const std::string& key) const {
    for (const auto& [k, v] : entries)
        if (k == key) return v;
    return std::nullopt;
}

std::string ConfigSection::require(const std::string& key,
                                   const std::string& where) const {
    const auto v = get(key);
    if (!v)
        throw ParseError(Errc::bad_config,
                         where + ": missing required key '" + key + "'");
    return *v;
}

ConfigFile read_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw IoError(Errc::io_failure, "cannot open " + path.string());
    ConfigFile config;
    config.source = path;
    ConfigSection* current = &config.top;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string stripped = trim(line);
        if (stripped.empty() || stripped[0] == '#') continue;
        const std::string where = path.string() + ":" + std::to_string(lineno);
        if (stripped.front() == '[') {
            if (stripped.back() != ']')
                throw ParseError(Errc::bad_config, where + ": unclosed section");
            const std::string inner = trim(stripped.substr(1, stripped.size() - 2));
            const std::size_t space = inner.find(' ');
            ConfigSection section;
            if (space == std::string::npos) {
                section.type = inner;
            } else {
                section.type = trim(inner.substr(0, space));
                section.name = trim(inner.substr(space + 1));
            }
            if (section.type.empty())
                throw ParseError(Errc::bad_config, where + ": empty section type");
            config.sections.push_back(std::move(section));
            current = &config.sections.back();
            continue;
        }
        const std::size_t eq = stripped.find('=');
        if (eq == std::string::npos)
            throw ParseError(Errc::bad_config, where + ": expected key=value");
        current->entries.emplace_back(trim(stripped.substr(0, eq)),
                                      trim(stripped.substr(eq + 1)));
    }
    return config;
}

PolicyScenario scenario_from_config(const ConfigFile& config) {
    const std::string where = config.source.string();
    PolicyScenario scenario;
    scenario.crop = config.top.require("crop", where);
    scenario.msp_cacp =
        parse_number(config.top.require("msp_cacp", where), where);
    scenario.cost_a2fl =
        parse_number(config.top.require("cost_a2fl", where), where);
    scenario.cost_c2 = parse_number(config.top.require("cost_c2", where), where);
    if (const auto bounds = config.top.get("bounds")) {
        const std::size_t comma = bounds->find(',');
        if (comma == std::string::npos)
            throw ParseError(Errc::bad_config,
                             where + ": bounds must be 'lower,upper'");
        scenario.bounds.lower =
            parse_number(trim(bounds->substr(0, comma)), where);
        scenario.bounds.upper =
            parse_number(trim(bounds->substr(comma + 1)), where);
    }
    for (const ConfigSection& section : config.sections) {
        if (section.type != "item")
            throw ParseError(Errc::bad_config,
                             where + ": unknown section type '" + section.type +
                                 "'");
        if (section.name.empty())
            throw ParseError(Errc::bad_config, where + ": item needs a name");
        if (scenario.elasticities.count(section.name))
            throw ParseError(Errc::bad_config,
                             where + ": duplicate item '" + section.name + "'");
        const std::string kind_text = section.require("kind", where);
        ItemKind kind;
        if (kind_text == "input")
            kind = ItemKind::Input;
        else if (kind_text == "output")
            kind = ItemKind::Output;
        else
            throw ParseError(Errc::bad_config,
                             where + ": item kind must be input or output");
        const double base =
            parse_number(section.require("base_price", where), where);
        const double terminal =
            parse_number(section.require("terminal_price", where), where);
        scenario.changes.push_back(
            make_price_change(ItemId{section.name, kind}, base, terminal));
        scenario.elasticities[section.name] =
            parse_number(section.require("elasticity", where), where);
    }
    if (scenario.changes.empty())
        throw ParseError(Errc::bad_config, where + ": scenario lists no items");
    return scenario;
}

PolicyScenario read_scenario_file(const std::filesystem::path& path) {
    return scenario_from_config(read_config(path));
}

void write_text_atomic(const std::filesystem::path& path,
                       const std::string& content) {
    if (path == "-") {
        std::fwrite(content.data(), 1, content.size(), stdout);
        return;
    }
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
            throw IoError(Errc::io_failure, "cannot write " + tmp.string());
        out.write(content.data(),
                  static_cast<std::streamsize>(content.size()));
        if (!out)
            throw IoError(Errc::io_failure, "short write to " + tmp.string());
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp);
        throw IoError(Errc::io_failure,
                      "cannot move output into place at " + path.string());
    }
}

std::string file_digest(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError(Errc::io_failure, "cannot open " + path.string());
    std::uint64_t hash = 1469598103934665603ULL;
    char buffer[4096];
    while (in.read(buffer, sizeof(buffer)) || in.gcount() > 0) {
        const std::streamsize got = in.gcount();
        for (std::streamsize i = 0; i < got; ++i) {
            hash ^= static_cast<unsigned char>(buffer[i]);
            hash *= 1099511628211ULL;
        }
        if (!in) break;
    }
    char hex[32];
    std::snprintf(hex, sizeof(hex), "%016llx",
                  static_cast<unsigned long long>(hash));
    return std::string("fnv1a64:") + hex;
}

}  // namespace farmgate
