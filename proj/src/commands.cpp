#include "farmgate/commands.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "farmgate/csv.hpp"
#include "farmgate/elasticities.hpp"
#include "farmgate/index_numbers.hpp"
#include "farmgate/io.hpp"
#include "farmgate/numeric.hpp"
#include "farmgate/translog.hpp"

namespace farmgate {

namespace {

using ordered_json = nlohmann::ordered_json;

std::string fmt(double v, bool full) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), full ? "%.17g" : "%.2f", v);
    return buf;
}

double jnum(double v) { return round_sig(v, 12); }

// ---- tfp ---------------------------------------------------------------

struct TfpTable {
    std::vector<int> years;
    std::vector<double> input, output, tfp;  // one row per year
    double mean_input = 0.0, mean_output = 0.0, mean_tfp = 0.0;
    const char* view = "chain";
};

TfpTable build_tfp_table(const PriceQuantityPanel& panel,
                         const PanelMetadata& meta, TfpView view,
                         bool geometric) {
    const std::vector<GrowthLink> links = growth_links(panel);
    TfpTable table;
    table.years = panel.years();

    // Growth rows carry 1.0 in the base year, matching the usual table
    // presentation; the summary averages run over these values.
    std::vector<double> in_growth{1.0}, out_growth{1.0}, tfp_growth{1.0};
    for (const GrowthLink& link : links) {
        in_growth.push_back(link.input_growth);
        out_growth.push_back(link.output_growth);
        tfp_growth.push_back(link.tfp_growth);
    }

    switch (view) {
        case TfpView::Growth: {
            table.view = "growth";
            table.input = in_growth;
            table.output = out_growth;
            table.tfp = tfp_growth;
            break;
        }
        case TfpView::Chain: {
            table.view = "chain";
            std::vector<double> li, lo, lt;
            for (const GrowthLink& link : links) {
                li.push_back(link.input_growth);
                lo.push_back(link.output_growth);
                lt.push_back(link.tfp_growth);
            }
            IndexSeries si = chain_over_years(li, panel.years(), IndexKind::Input);
            IndexSeries so = chain_over_years(lo, panel.years(), IndexKind::Output);
            IndexSeries st = chain_over_years(lt, panel.years(), IndexKind::TFP);
            if (meta.base_year) {
                si = rebase(si, *meta.base_year);
                so = rebase(so, *meta.base_year);
                st = rebase(st, *meta.base_year);
            }
            table.input = si.values;
            table.output = so.values;
            table.tfp = st.values;
            break;
        }
        case TfpView::FixedBase: {
            table.view = "fixed_base";
            const int base = meta.base_year.value_or(-1);
            const IndexSeries si =
                fixed_base_series(panel, ItemKind::Input, base);
            const IndexSeries so =
                fixed_base_series(panel, ItemKind::Output, base);
            table.input = si.values;
            table.output = so.values;
            table.tfp.resize(si.values.size());
            for (std::size_t t = 0; t < si.values.size(); ++t)
                table.tfp[t] = tfp_link(so.values[t], si.values[t]);
            break;
        }
    }

    auto avg = [&](const std::vector<double>& v) {
        return geometric ? geometric_average_growth(v) : average_annual_growth(v);
    };
    // The summary row always reports mean annual growth, the table's
    // "Average" row convention, regardless of the displayed view.
    table.mean_input = avg(in_growth);
    table.mean_output = avg(out_growth);
    table.mean_tfp = avg(tfp_growth);
    return table;
}

std::string tfp_csv(const TfpTable& table, bool full) {
    std::ostringstream out;
    out << "year,input_index,output_index,tfp_index\n";
    for (std::size_t t = 0; t < table.years.size(); ++t)
        out << table.years[t] << ',' << fmt(table.input[t], full) << ','
            << fmt(table.output[t], full) << ',' << fmt(table.tfp[t], full)
            << '\n';
    out << "average," << fmt(table.mean_input, full) << ','
        << fmt(table.mean_output, full) << ',' << fmt(table.mean_tfp, full)
        << '\n';
    return out.str();
}

ordered_json tfp_json(const TfpTable& table) {
    ordered_json j;
    j["view"] = table.view;
    j["years"] = table.years;
    auto arr = [](const std::vector<double>& v) {
        ordered_json a = ordered_json::array();
        for (double x : v) a.push_back(jnum(x));
        return a;
    };
    j["input_index"] = arr(table.input);
    j["output_index"] = arr(table.output);
    j["tfp_index"] = arr(table.tfp);
    ordered_json mean;
    mean["input"] = jnum(table.mean_input);
    mean["output"] = jnum(table.mean_output);
    mean["tfp"] = jnum(table.mean_tfp);
    j["average_annual_growth"] = mean;
    return j;
}

// ---- elasticities -------------------------------------------------------

std::string elast_csv(const ElasticityReport& report, bool full) {
    std::ostringstream out;
    out << "block,factor";
    for (const std::string& name : report.inputs) out << ',' << name;
    out << ",output\n";
    const auto n = static_cast<Eigen::Index>(report.inputs.size());
    for (Eigen::Index i = 0; i < n; ++i) {
        out << "price," << report.inputs[static_cast<std::size_t>(i)];
        for (Eigen::Index j = 0; j < n; ++j)
            out << ',' << fmt(report.price(i, j), full);
        out << ','
            << fmt(report.output_elasticity[static_cast<std::size_t>(i)], full)
            << '\n';
    }
    for (Eigen::Index i = 0; i < n; ++i) {
        out << "allen," << report.inputs[static_cast<std::size_t>(i)];
        for (Eigen::Index j = 0; j < n; ++j)
            out << ',' << fmt(report.allen(i, j), full);
        out << ",\n";  // Allen block has no output column
    }
    return out.str();
}

ordered_json elast_json(const ElasticityReport& report, double output_level,
                        std::span<const double> prices) {
    ordered_json j;
    j["inputs"] = report.inputs;
    ordered_json shares;
    for (std::size_t i = 0; i < report.inputs.size(); ++i)
        shares[report.inputs[i]] = jnum(report.shares_used[i]);
    j["shares_used"] = shares;
    j["output_level"] = jnum(output_level);
    ordered_json pj;
    for (std::size_t i = 0; i < report.inputs.size(); ++i)
        pj[report.inputs[i]] = jnum(prices[i]);
    j["prices_used"] = pj;
    auto matrix = [&](const Eigen::MatrixXd& m) {
        ordered_json rows = ordered_json::array();
        for (Eigen::Index i = 0; i < m.rows(); ++i) {
            ordered_json row = ordered_json::array();
            for (Eigen::Index k = 0; k < m.cols(); ++k)
                row.push_back(jnum(m(i, k)));
            rows.push_back(row);
        }
        return rows;
    };
    j["price"] = matrix(report.price);
    j["allen"] = matrix(report.allen);
    ordered_json oe;
    for (std::size_t i = 0; i < report.inputs.size(); ++i)
        oe[report.inputs[i]] = jnum(report.output_elasticity[i]);
    j["output_elasticity"] = oe;
    j["own_price_all_negative"] = report.own_price_all_negative;
    return j;
}

std::map<std::string, double> parse_named_values(const std::string& text,
                                                 const std::string& where) {
    std::map<std::string, double> out;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t comma = text.find(',', pos);
        if (comma == std::string::npos) comma = text.size();
        const std::string piece = text.substr(pos, comma - pos);
        const std::size_t eq = piece.find('=');
        if (eq == std::string::npos)
            throw ValidationError(Errc::bad_config,
                                  where + ": expected name=value, got '" +
                                      piece + "'");
        out[piece.substr(0, eq)] = parse_number(piece.substr(eq + 1), where);
        pos = comma + 1;
    }
    if (out.empty())
        throw ValidationError(Errc::bad_config, where + ": empty value list");
    return out;
}

std::vector<double> values_for_inputs(const std::map<std::string, double>& named,
                                      const std::vector<std::string>& inputs,
                                      const std::string& where) {
    if (named.size() != inputs.size())
        throw ValidationError(Errc::bad_config,
                              where + ": expected one value per input");
    std::vector<double> out;
    for (const std::string& name : inputs) {
        const auto it = named.find(name);
        if (it == named.end())
            throw ValidationError(Errc::bad_config,
                                  where + ": no value for input '" + name + "'");
        out.push_back(it->second);
    }
    return out;
}

struct EvaluationPoint {
    std::vector<double> shares;
    std::vector<double> prices;
    double output_level = 1.0;
};

EvaluationPoint resolve_evaluation_point(const ElastCommand& cmd,
                                         const std::vector<std::string>& inputs) {
    EvaluationPoint point;
    point.prices.assign(inputs.size(), 1.0);

    if (cmd.observations) {
        const CostDataset data = read_cost_observations_csv(*cmd.observations);
        if (data.inputs != inputs)
            throw ValidationError(Errc::bad_config,
                                  "observation inputs do not match the "
                                  "coefficient file");
        if (data.observations.empty())
            throw ValidationError(Errc::bad_config,
                                  "observation file has no rows");
        const double count = static_cast<double>(data.observations.size());
        point.shares.assign(inputs.size(), 0.0);
        std::vector<double> log_prices(inputs.size(), 0.0);
        double log_output = 0.0;
        for (const CostObservation& obs : data.observations) {
            for (std::size_t i = 0; i < inputs.size(); ++i) {
                point.shares[i] += obs.cost_shares[i] / count;
                log_prices[i] += std::log(obs.input_prices[i]) / count;
            }
            log_output += std::log(obs.output_level) / count;
        }
        for (std::size_t i = 0; i < inputs.size(); ++i)
            point.prices[i] = std::exp(log_prices[i]);
        point.output_level = std::exp(log_output);
    }

    if (!cmd.shares.empty())
        point.shares = values_for_inputs(parse_named_values(cmd.shares, "--shares"),
                                         inputs, "--shares");
    if (!cmd.prices.empty())
        point.prices = values_for_inputs(parse_named_values(cmd.prices, "--prices"),
                                         inputs, "--prices");
    if (cmd.output_level) point.output_level = *cmd.output_level;

    if (point.shares.empty())
        throw ValidationError(Errc::bad_config,
                              "no evaluation shares: pass --shares or --obs");
    return point;
}

// ---- policy --------------------------------------------------------------

ordered_json policy_json(const PolicyScenario& scenario, const SspResult& result,
                         bool msp_base_gaps) {
    ordered_json j;
    j["crop"] = scenario.crop;
    j["msp_cacp"] = jnum(scenario.msp_cacp);
    j["cost_a2fl"] = jnum(scenario.cost_a2fl);
    j["cost_c2"] = jnum(scenario.cost_c2);
    ordered_json changes = ordered_json::array();
    for (std::size_t i = 0; i < scenario.changes.size(); ++i) {
        const PriceChange& change = scenario.changes[i];
        ordered_json c;
        c["item"] = change.item.name;
        c["kind"] = item_kind_name(change.item.kind);
        c["base_price"] = jnum(change.base_price);
        c["terminal_price"] = jnum(change.terminal_price);
        c["growth"] = jnum(change.growth);
        c["elasticity"] = jnum(scenario.elasticities.at(change.item.name));
        c["contribution"] = jnum(result.contributions[i].second);
        changes.push_back(c);
    }
    j["changes"] = changes;
    j["net_effect_raw"] = jnum(result.net_effect_raw);
    j["net_effect_clamped"] = jnum(result.net_effect_clamped);
    j["was_clamped"] = result.was_clamped;
    ordered_json bounds;
    bounds["lower"] = jnum(scenario.bounds.lower);
    bounds["upper"] = jnum(scenario.bounds.upper);
    j["bounds"] = bounds;
    j["ssp"] = static_cast<long long>(std::llround(result.ssp));
    j["swaminathan_price"] =
        static_cast<long long>(std::llround(result.swaminathan_price));
    j["gap_cacp_vs_swaminathan_pct"] = jnum(result.gap_cacp_vs_swaminathan_pct);
    j["gap_cacp_vs_ssp_pct"] = jnum(result.gap_cacp_vs_ssp_pct);
    if (msp_base_gaps) {
        ordered_json alt;
        alt["swaminathan_vs_msp_pct"] =
            jnum((result.swaminathan_price - scenario.msp_cacp) /
                 scenario.msp_cacp * 100.0);
        alt["ssp_vs_msp_pct"] =
            jnum((result.ssp - scenario.msp_cacp) / scenario.msp_cacp * 100.0);
        j["gap_msp_base"] = alt;
    }
    return j;
}

std::string policy_csv(const PolicyScenario& scenario, const SspResult& result,
                       bool full) {
    std::ostringstream out;
    out << "key,value\n";
    out << "crop," << scenario.crop << '\n';
    out << "cost_a2fl," << fmt(scenario.cost_a2fl, full) << '\n';
    out << "cost_c2," << fmt(scenario.cost_c2, full) << '\n';
    out << "msp_cacp," << fmt(scenario.msp_cacp, full) << '\n';
    out << "swaminathan_price," << std::llround(result.swaminathan_price) << '\n';
    out << "gap_cacp_vs_swaminathan_pct,"
        << fmt(result.gap_cacp_vs_swaminathan_pct, full) << '\n';
    out << "ssp," << std::llround(result.ssp) << '\n';
    out << "gap_cacp_vs_ssp_pct," << fmt(result.gap_cacp_vs_ssp_pct, full)
        << '\n';
    out << "net_effect_raw," << fmt(result.net_effect_raw, full) << '\n';
    out << "net_effect_clamped," << fmt(result.net_effect_clamped, full) << '\n';
    out << "was_clamped," << (result.was_clamped ? "true" : "false") << '\n';
    for (const auto& [name, value] : result.contributions)
        out << "contribution_" << name << ',' << fmt(value, full) << '\n';
    return out.str();
}

std::string policy_table(const PolicyScenario& scenario,
                         const SspResult& result) {
    char line[160];
    std::ostringstream out;
    out << "Determination of MSP through different pricing methods ("
        << scenario.crop << ")\n";
    auto row = [&](const char* label, const std::string& value) {
        std::snprintf(line, sizeof(line), "  %-38s %12s\n", label,
                      value.c_str());
        out << line;
    };
    auto currency = [](double v) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%.6g", v);
        return std::string(buf);
    };
    auto pct = [](double v) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%.2f", v);
        return std::string(buf);
    };
    row("Cost A2+FL (per qtl)", currency(scenario.cost_a2fl));
    row("Cost C2 (per qtl)", currency(scenario.cost_c2));
    row("MSP recommended by CACP (per qtl)", currency(scenario.msp_cacp));
    row("Swaminathan MSP (C2+50%) (per qtl)", currency(result.swaminathan_price));
    row("Gap: CACP vs. Swaminathan (%)", pct(result.gap_cacp_vs_swaminathan_pct));
    row("Strategic Support Price (per qtl)", currency(result.ssp));
    row("Gap: CACP MSP vs. SSP (%)", pct(result.gap_cacp_vs_ssp_pct));
    std::snprintf(line, sizeof(line),
                  "  Net effect: raw %.4f, reported %.2f%s\n",
                  result.net_effect_raw, result.net_effect_clamped,
                  result.was_clamped ? " (clamped)" : "");
    out << line;
    return out.str();
}

}  // namespace

void run_tfp(const TfpCommand& cmd) {
    const RawPanel raw = read_panel_csv(cmd.panel);
    const PanelMetadata meta = read_panel_metadata(cmd.panel);
    const PriceQuantityPanel panel = validate_panel(raw);
    const TfpTable table =
        build_tfp_table(panel, meta, cmd.view, cmd.geometric_mean);
    if (cmd.format == OutputFormat::Csv)
        write_text_atomic(cmd.out, tfp_csv(table, cmd.full_precision));
    else
        write_text_atomic(cmd.out, tfp_json(table).dump(2) + "\n");
}

void run_fit(const FitCommand& cmd) {
    const CostDataset data = read_cost_observations_csv(cmd.observations);
    EstimationOptions options;
    options.max_iterations = cmd.max_iterations;
    options.convergence_tol = cmd.tolerance;
    options.numeraire = cmd.numeraire;
    options.dropped_share_equation = cmd.dropped_share;
    if (cmd.estimator == "ifgls")
        options.estimator = Estimator::IteratedFeasibleGls;
    else if (cmd.estimator == "ols")
        options.estimator = Estimator::StackedRestrictedLs;
    else
        throw ValidationError(Errc::bad_config,
                              "estimator must be 'ifgls' or 'ols'");
    const FitReport report = fit(data, options);
    write_text_atomic(cmd.out, coefficients_to_json(report));
}

void run_elast(const ElastCommand& cmd) {
    const TranslogCoefficients coeffs =
        coefficients_from_json_file(cmd.coefficients);
    const EvaluationPoint point = resolve_evaluation_point(cmd, coeffs.inputs());
    const ShareVector shares =
        ShareVector::validated(coeffs.inputs(), point.shares);
    const ElasticityReport report =
        full_report(coeffs, shares, point.output_level, point.prices);
    if (cmd.format == OutputFormat::Csv)
        write_text_atomic(cmd.out, elast_csv(report, cmd.full_precision));
    else
        write_text_atomic(
            cmd.out,
            elast_json(report, point.output_level, point.prices).dump(2) + "\n");
}

void run_policy(const PolicyCommand& cmd) {
    PolicyScenario scenario = read_scenario_file(cmd.scenario);
    if (cmd.bounds_override) scenario.bounds = *cmd.bounds_override;
    const SspResult result = evaluate_scenario(scenario);
    if (cmd.format == OutputFormat::Json)
        write_text_atomic(cmd.out,
                          policy_json(scenario, result, cmd.msp_base_gaps)
                                  .dump(2) +
                              "\n");
    else
        write_text_atomic(cmd.out,
                          policy_csv(scenario, result, cmd.full_precision));
    if (!cmd.quiet && cmd.out != "-")
        std::fputs(policy_table(scenario, result).c_str(), stdout);
}

void run_report(const ReportCommand& cmd) {
    const ConfigFile config = read_config(cmd.config);
    const std::filesystem::path base_dir = cmd.config.parent_path();
    auto resolve = [&](const std::string& value) {
        std::filesystem::path p(value);
        return p.is_absolute() ? p : base_dir / p;
    };

    struct CropJob {
        std::string name;
        std::optional<std::string> panel_path, coeffs_path;
        std::string scenario_path;
        std::optional<PriceQuantityPanel> panel;
        PanelMetadata panel_meta;
        std::optional<TranslogCoefficients> coeffs;
        std::optional<ElastCommand> elast_point;  // reuses the option parser
        PolicyScenario scenario;
    };

    std::vector<CropJob> jobs;
    for (const ConfigSection& section : config.sections) {
        if (section.type != "crop")
            throw ValidationError(Errc::bad_config,
                                  config.source.string() +
                                      ": unknown section type '" + section.type +
                                      "'");
        if (section.name.empty())
            throw ValidationError(Errc::bad_config,
                                  config.source.string() + ": crop needs a name");
        CropJob job;
        job.name = section.name;
        const std::string where = config.source.string() + " [crop " +
                                  section.name + "]";
        job.scenario_path = section.require("scenario", where);
        job.panel_path = section.get("panel");
        job.coeffs_path = section.get("coeffs");
        if (job.coeffs_path) {
            ElastCommand e;
            if (const auto obs = section.get("obs"))
                e.observations = resolve(*obs);
            if (const auto shares = section.get("shares")) e.shares = *shares;
            if (const auto prices = section.get("prices")) e.prices = *prices;
            if (const auto y = section.get("output_level"))
                e.output_level = parse_number(*y, where);
            job.elast_point = std::move(e);
        }
        jobs.push_back(std::move(job));
    }
    if (jobs.empty())
        throw ValidationError(Errc::bad_config,
                              config.source.string() + ": no crops configured");

    std::sort(jobs.begin(), jobs.end(),
              [](const CropJob& a, const CropJob& b) { return a.name < b.name; });

    // fail-fast: load and validate every input before computing anything
    for (CropJob& job : jobs) {
        job.scenario = read_scenario_file(resolve(job.scenario_path));
        if (job.panel_path) {
            job.panel = validate_panel(read_panel_csv(resolve(*job.panel_path)));
            job.panel_meta = read_panel_metadata(resolve(*job.panel_path));
        }
        if (job.coeffs_path)
            job.coeffs = coefficients_from_json_file(resolve(*job.coeffs_path));
    }

    ordered_json provenance;
    provenance["tool"] = "farmgate";
    ordered_json cfg;
    cfg["path"] = cmd.config.string();
    cfg["digest"] = file_digest(cmd.config);
    provenance["config"] = cfg;
    ordered_json inputs = ordered_json::array();
    for (const CropJob& job : jobs) {
        auto add = [&](const char* role, const std::string& path) {
            ordered_json entry;
            entry["crop"] = job.name;
            entry["role"] = role;
            entry["path"] = path;
            entry["digest"] = file_digest(resolve(path));
            inputs.push_back(entry);
        };
        if (job.panel_path) add("panel", *job.panel_path);
        if (job.coeffs_path) add("coeffs", *job.coeffs_path);
        add("scenario", job.scenario_path);
    }
    provenance["inputs"] = inputs;
    ordered_json opts;
    opts["precision"] = cmd.full_precision ? "full" : "2dp";
    provenance["options"] = opts;

    ordered_json crops = ordered_json::array();
    std::vector<std::pair<std::filesystem::path, std::string>> files;
    for (const CropJob& job : jobs) {
        ordered_json crop;
        crop["name"] = job.name;
        if (job.panel) {
            const TfpTable table = build_tfp_table(*job.panel, job.panel_meta,
                                                   TfpView::Chain, false);
            crop["tfp"] = tfp_json(table);
            files.emplace_back(cmd.out_dir / (job.name + "_tfp.csv"),
                               tfp_csv(table, cmd.full_precision));
        } else {
            crop["tfp"] = nullptr;
        }
        if (job.coeffs) {
            const EvaluationPoint point =
                resolve_evaluation_point(*job.elast_point, job.coeffs->inputs());
            const ShareVector shares =
                ShareVector::validated(job.coeffs->inputs(), point.shares);
            const ElasticityReport elast =
                full_report(*job.coeffs, shares, point.output_level,
                            point.prices);
            crop["elasticities"] =
                elast_json(elast, point.output_level, point.prices);
            files.emplace_back(cmd.out_dir / (job.name + "_elasticities.csv"),
                               elast_csv(elast, cmd.full_precision));
        } else {
            crop["elasticities"] = nullptr;
        }
        const SspResult result = evaluate_scenario(job.scenario);
        crop["policy"] = policy_json(job.scenario, result, false);
        crops.push_back(crop);
    }

    ordered_json bundle;
    bundle["provenance"] = provenance;
    bundle["crops"] = crops;

    std::error_code ec;
    std::filesystem::create_directories(cmd.out_dir, ec);
    if (ec)
        throw IoError(Errc::io_failure,
                      "cannot create output directory " + cmd.out_dir.string());
    write_text_atomic(cmd.out_dir / "report.json", bundle.dump(2) + "\n");
    for (const auto& [path, content] : files) write_text_atomic(path, content);
}

}  // namespace farmgate
