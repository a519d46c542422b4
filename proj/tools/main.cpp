#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <optional>
#include <string>

#include "farmgate/commands.hpp"
#include "farmgate/csv.hpp"
#include "farmgate/errors.hpp"

namespace {

using farmgate::OutputFormat;

OutputFormat default_format(OutputFormat fallback) {
    const char* env = std::getenv("FARMGATE_FORMAT");
    if (!env) return fallback;
    const std::string v(env);
    if (v == "csv") return OutputFormat::Csv;
    if (v == "json") return OutputFormat::Json;
    return fallback;
}

void add_format_option(CLI::App* app, std::string& format) {
    app->add_option("--format", format, "Output format (csv or json)")
        ->check(CLI::IsMember({"csv", "json"}));
}

OutputFormat parse_format(const std::string& text, OutputFormat fallback) {
    if (text == "csv") return OutputFormat::Csv;
    if (text == "json") return OutputFormat::Json;
    return default_format(fallback);
}

farmgate::NetEffectBounds parse_bounds(const std::string& text) {
    const std::size_t comma = text.find(',');
    if (comma == std::string::npos)
        throw farmgate::ValidationError(farmgate::Errc::invalid_bounds,
                                        "--bounds expects 'lower,upper'");
    auto strip = [](std::string s) {
        s.erase(0, s.find_first_not_of(" \t"));
        s.erase(s.find_last_not_of(" \t") + 1);
        return s;
    };
    farmgate::NetEffectBounds bounds;
    bounds.lower =
        farmgate::parse_number(strip(text.substr(0, comma)), "--bounds");
    bounds.upper =
        farmgate::parse_number(strip(text.substr(comma + 1)), "--bounds");
    return bounds;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "Crop price-policy engine: Tornqvist-Theil TFP indices, translog "
        "cost-function estimation, input-demand elasticities and strategic "
        "support price recommendations over cost/price panels."};
    app.require_subcommand(1);

    farmgate::TfpCommand tfp;
    std::string tfp_format, tfp_view = "chain";
    auto* tfp_app = app.add_subcommand(
        "tfp", "Compute input/output/TFP index series from a panel CSV");
    tfp_app->add_option("--panel", tfp.panel, "Panel CSV (item,kind,year,price,quantity)")
        ->required();
    tfp_app->add_option("--out", tfp.out, "Output path, '-' for stdout");
    tfp_app->add_option("--view", tfp_view,
                        "Row content: chain, growth, or fixed-base series")
        ->check(CLI::IsMember({"chain", "growth", "fixed-base"}));
    tfp_app->add_flag("--geometric-mean", tfp.geometric_mean,
                      "Summarize growth with a geometric instead of arithmetic mean");
    tfp_app->add_flag("--precision-full", tfp.full_precision,
                      "Emit full-precision values instead of 2 decimals");
    add_format_option(tfp_app, tfp_format);

    farmgate::FitCommand fit;
    auto* fit_app = app.add_subcommand(
        "fit", "Estimate translog cost-function coefficients from observations");
    fit_app->add_option("--obs", fit.observations, "Cost-observation CSV")
        ->required();
    fit_app->add_option("--out", fit.out, "Coefficient JSON path, '-' for stdout");
    fit_app->add_option("--numeraire", fit.numeraire,
                        "Input whose price normalizes the system (default: last)");
    fit_app->add_option("--drop", fit.dropped_share,
                        "Share equation to drop (default: the numeraire's)");
    fit_app->add_option("--estimator", fit.estimator,
                        "ifgls (iterated feasible GLS) or ols (one-pass stacked)")
        ->check(CLI::IsMember({"ifgls", "ols"}));
    fit_app->add_option("--max-iter", fit.max_iterations, "Iteration cap");
    fit_app->add_option("--tol", fit.tolerance, "Convergence tolerance");

    farmgate::ElastCommand elast;
    std::string elast_format;
    auto* elast_app = app.add_subcommand(
        "elast", "Derive Allen and price elasticities from fitted coefficients");
    elast_app->add_option("--coeffs", elast.coefficients, "Coefficient JSON")
        ->required();
    elast_app->add_option("--out", elast.out, "Output path, '-' for stdout");
    std::string elast_obs;
    elast_app->add_option("--obs", elast_obs,
                          "Observation CSV; evaluation point = sample means");
    elast_app->add_option("--shares", elast.shares,
                          "Evaluation shares as name=value,...");
    elast_app->add_option("--prices", elast.prices,
                          "Evaluation prices as name=value,... (default 1)");
    double elast_output_level = 0.0;
    auto* y_opt = elast_app->add_option("--output-level", elast_output_level,
                                        "Evaluation output level (default 1)");
    elast_app->add_flag("--precision-full", elast.full_precision,
                        "Emit full-precision values instead of 2 decimals");
    add_format_option(elast_app, elast_format);

    farmgate::PolicyCommand policy;
    std::string policy_format, policy_bounds;
    auto* policy_app = app.add_subcommand(
        "policy", "Evaluate a strategic-support-price scenario");
    policy_app->add_option("--scenario", policy.scenario, "Scenario config file")
        ->required();
    policy_app->add_option("--out", policy.out, "Output path, '-' for stdout");
    policy_app->add_option("--bounds", policy_bounds,
                           "Net-effect bounds override as lower,upper");
    policy_app->add_flag("--msp-base-gaps", policy.msp_base_gaps,
                         "Also report gaps with the CACP MSP as the base");
    policy_app->add_flag("--precision-full", policy.full_precision,
                         "Full-precision CSV values");
    policy_app->add_flag("--quiet", policy.quiet,
                         "Suppress the summary table on stdout");
    add_format_option(policy_app, policy_format);

    farmgate::ReportCommand report;
    auto* report_app = app.add_subcommand(
        "report", "Run tfp, elast and policy stages for each configured crop");
    report_app->add_option("--config", report.config, "Report config file")
        ->required();
    report_app->add_option("--out", report.out_dir, "Output directory")
        ->required();
    report_app->add_flag("--precision-full", report.full_precision,
                         "Full-precision CSV values");

    CLI11_PARSE(app, argc, argv);

    try {
        if (tfp_app->parsed()) {
            if (tfp_view == "growth") tfp.view = farmgate::TfpView::Growth;
            if (tfp_view == "fixed-base") tfp.view = farmgate::TfpView::FixedBase;
            tfp.format = parse_format(tfp_format, OutputFormat::Csv);
            farmgate::run_tfp(tfp);
        } else if (fit_app->parsed()) {
            farmgate::run_fit(fit);
        } else if (elast_app->parsed()) {
            if (!elast_obs.empty()) elast.observations = elast_obs;
            if (y_opt->count() > 0) elast.output_level = elast_output_level;
            elast.format = parse_format(elast_format, OutputFormat::Csv);
            farmgate::run_elast(elast);
        } else if (policy_app->parsed()) {
            if (!policy_bounds.empty())
                policy.bounds_override = parse_bounds(policy_bounds);
            policy.format = parse_format(policy_format, OutputFormat::Json);
            farmgate::run_policy(policy);
        } else if (report_app->parsed()) {
            farmgate::run_report(report);
        }
    } catch (const farmgate::IoError& e) {
        std::fprintf(stderr, "error: io: %s: %s\n",
                     farmgate::errc_name(e.code()), e.what());
        return 3;
    } catch (const farmgate::ComputationError& e) {
        std::fprintf(stderr, "error: computation: %s: %s\n",
                     farmgate::errc_name(e.code()), e.what());
        return 2;
    } catch (const farmgate::ValidationError& e) {
        std::fprintf(stderr, "error: validation: %s: %s\n",
                     farmgate::errc_name(e.code()), e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: internal: %s\n", e.what());
        return 2;
    }
    return 0;
}
