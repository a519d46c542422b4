#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "farmgate/policy.hpp"

namespace farmgate {

enum class OutputFormat { Csv, Json };

enum class TfpView { Chain, Growth, FixedBase };

struct TfpCommand {
    std::filesystem::path panel;
    std::filesystem::path out = "-";
    TfpView view = TfpView::Chain;
    bool geometric_mean = false;
    bool full_precision = false;
    OutputFormat format = OutputFormat::Csv;
};

struct FitCommand {
    std::filesystem::path observations;
    std::filesystem::path out = "-";
    std::string numeraire;             // empty = last input column
    std::string dropped_share;         // empty = numeraire
    std::string estimator = "ifgls";   // ifgls | ols
    int max_iterations = 100;
    double tolerance = 1e-8;
};

struct ElastCommand {
    std::filesystem::path coefficients;
    std::filesystem::path out = "-";
    std::optional<std::filesystem::path> observations;  // sample-mean point
    std::string shares;  // "name=value,..." overrides
    std::string prices;  // "name=value,...", defaults to 1
    std::optional<double> output_level;  // defaults to 1
    OutputFormat format = OutputFormat::Csv;
    bool full_precision = false;
};

struct PolicyCommand {
    std::filesystem::path scenario;
    std::filesystem::path out = "-";
    std::optional<NetEffectBounds> bounds_override;
    OutputFormat format = OutputFormat::Json;
    bool msp_base_gaps = false;  // additionally report gaps on an MSP base
    bool full_precision = false;
    bool quiet = false;  // suppress the summary table on stdout
};

struct ReportCommand {
    std::filesystem::path config;
    std::filesystem::path out_dir;
    bool full_precision = false;
};

// Each command validates every input before writing anything, then writes
// outputs atomically. Errors surface as farmgate exceptions; the CLI entry
// point maps them to exit codes.
void run_tfp(const TfpCommand& cmd);
void run_fit(const FitCommand& cmd);
void run_elast(const ElastCommand& cmd);
void run_policy(const PolicyCommand& cmd);
void run_report(const ReportCommand& cmd);

}  // namespace farmgate
