#include "farmgate/index_numbers.hpp"

#include <cmath>
#include <string>

namespace farmgate {

namespace {

std::size_t checked_year_index(const PriceQuantityPanel& panel, int year) {
    const auto idx = panel.year_index(year);
    if (!idx)
        throw ValidationError(Errc::year_not_in_panel,
                              "year " + std::to_string(year) + " not in panel");
    return *idx;
}

}  // namespace

double tornqvist_link_between(const PriceQuantityPanel& panel, int year_a,
                              int year_b, ItemKind kind) {
    const std::size_t ta = checked_year_index(panel, year_a);
    const std::size_t tb = checked_year_index(panel, year_b);
    const ShareVector sa = shares_from_panel(panel, year_a, kind);
    const ShareVector sb = shares_from_panel(panel, year_b, kind);
    const auto idx = panel.items_of_kind(kind);

    double log_sum = 0.0;
    for (std::size_t k = 0; k < idx.size(); ++k) {
        const double weight = 0.5 * (sa[k] + sb[k]);
        if (weight == 0.0) continue;  // item absent in both years
        const double qa = panel.quantity(idx[k], ta);
        const double qb = panel.quantity(idx[k], tb);
        if (qa <= 0.0 || qb <= 0.0)
            throw ComputationError(
                Errc::undefined_ratio,
                "zero quantity with positive share weight for item '" +
                    panel.items()[idx[k]].name + "' between years " +
                    std::to_string(year_a) + " and " + std::to_string(year_b));
        log_sum += weight * std::log(qb / qa);
    }
    return std::exp(log_sum);
}

namespace {

double adjacent_link(const PriceQuantityPanel& panel, int year_prev, int year,
                     ItemKind kind) {
    const auto tp = panel.year_index(year_prev);
    const auto tc = panel.year_index(year);
    if (!tp || !tc || *tc != *tp + 1)
        throw ValidationError(Errc::year_pair_invalid,
                              "years " + std::to_string(year_prev) + " and " +
                                  std::to_string(year) +
                                  " are not adjacent in the panel");
    return tornqvist_link_between(panel, year_prev, year, kind);
}

}  // namespace

double tornqvist_output_link(const PriceQuantityPanel& panel, int year_prev,
                             int year) {
    return adjacent_link(panel, year_prev, year, ItemKind::Output);
}

double tornqvist_input_link(const PriceQuantityPanel& panel, int year_prev,
                            int year) {
    return adjacent_link(panel, year_prev, year, ItemKind::Input);
}

double tfp_link(double output_growth, double input_growth) {
    if (!(output_growth > 0.0) || !(input_growth > 0.0))
        throw ComputationError(Errc::non_positive_growth,
                               "growth ratios must be positive");
    return output_growth / input_growth;
}

std::vector<GrowthLink> growth_links(const PriceQuantityPanel& panel) {
    std::vector<GrowthLink> links;
    const auto& years = panel.years();
    for (std::size_t t = 1; t < years.size(); ++t) {
        GrowthLink link;
        link.from_year = years[t - 1];
        link.to_year = years[t];
        link.output_growth = tornqvist_output_link(panel, years[t - 1], years[t]);
        link.input_growth = tornqvist_input_link(panel, years[t - 1], years[t]);
        link.tfp_growth = tfp_link(link.output_growth, link.input_growth);
        links.push_back(link);
    }
    return links;
}

IndexSeries chain(std::span<const double> links, int base_year, IndexKind kind) {
    std::vector<int> years(links.size() + 1);
    for (std::size_t k = 0; k < years.size(); ++k)
        years[k] = base_year + static_cast<int>(k);
    return chain_over_years(links, years, kind);
}

IndexSeries chain_over_years(std::span<const double> links,
                             std::span<const int> years, IndexKind kind) {
    if (years.size() != links.size() + 1)
        throw ComputationError(Errc::empty_links,
                               "need exactly links+1 year labels");
    IndexSeries series;
    series.kind = kind;
    series.base_year = years.front();
    series.years.assign(years.begin(), years.end());
    series.values.resize(links.size() + 1);
    series.values[0] = 1.0;
    double acc = 1.0;
    for (std::size_t k = 0; k < links.size(); ++k) {
        if (!(links[k] > 0.0))
            throw ComputationError(Errc::non_positive_growth,
                                   "chain links must be positive");
        acc *= links[k];
        series.values[k + 1] = acc;
    }
    return series;
}

IndexSeries fixed_base_series(const PriceQuantityPanel& panel, ItemKind kind,
                              int base_year) {
    const auto& years = panel.years();
    const int base = base_year < 0 ? years.front() : base_year;
    if (!panel.year_index(base))
        throw ValidationError(Errc::year_not_in_panel,
                              "base year " + std::to_string(base) +
                                  " not in panel");
    IndexSeries series;
    series.kind = kind == ItemKind::Input ? IndexKind::Input : IndexKind::Output;
    series.base_year = base;
    series.years = years;
    series.values.resize(years.size());
    for (std::size_t t = 0; t < years.size(); ++t)
        series.values[t] =
            years[t] == base
                ? 1.0
                : tornqvist_link_between(panel, base, years[t], kind);
    return series;
}

IndexSeries rebase(const IndexSeries& series, int new_base) {
    std::size_t idx = series.years.size();
    for (std::size_t t = 0; t < series.years.size(); ++t)
        if (series.years[t] == new_base) idx = t;
    if (idx == series.years.size())
        throw ValidationError(Errc::year_not_in_panel,
                              "base year " + std::to_string(new_base) +
                                  " not in index series");
    IndexSeries out = series;
    out.base_year = new_base;
    const double pivot = series.values[idx];
    for (double& v : out.values) v /= pivot;
    return out;
}

double average_annual_growth(std::span<const double> links) {
    if (links.empty())
        throw ComputationError(Errc::empty_links, "no links to average");
    double sum = 0.0;
    for (double v : links) sum += v;
    return sum / static_cast<double>(links.size());
}

double geometric_average_growth(std::span<const double> links) {
    if (links.empty())
        throw ComputationError(Errc::empty_links, "no links to average");
    double log_sum = 0.0;
    for (double v : links) {
        if (!(v > 0.0))
            throw ComputationError(Errc::non_positive_growth,
                                   "geometric mean needs positive links");
        log_sum += std::log(v);
    }
    return std::exp(log_sum / static_cast<double>(links.size()));
}

}  // namespace farmgate
