#pragma once

#include <span>
#include <vector>

#include "farmgate/data_model.hpp"

namespace farmgate {

// One adjacent-year step: growth ratios for output, input and their
// quotient. tfp_growth == output_growth / input_growth by construction.
struct GrowthLink {
    int from_year = 0;
    int to_year = 0;
    double output_growth = 1.0;
    double input_growth = 1.0;
    double tfp_growth = 1.0;
};

// Tornqvist-Theil aggregate quantity ratio between two years of the panel:
// exp( sum_i 1/2 (s_i,a + s_i,b) ln(q_i,b / q_i,a) ) over items of `kind`,
// with value shares computed from the panel itself. An item whose average
// share weight is zero is skipped; a zero quantity under a positive weight
// is an UndefinedRatio error.
double tornqvist_link_between(const PriceQuantityPanel& panel, int year_a,
                              int year_b, ItemKind kind);

// Adjacent-pair forms; both years must be consecutive in the panel's
// year list.
double tornqvist_output_link(const PriceQuantityPanel& panel, int year_prev,
                             int year);
double tornqvist_input_link(const PriceQuantityPanel& panel, int year_prev,
                            int year);

double tfp_link(double output_growth, double input_growth);

// Every adjacent-year link of the panel, in year order.
std::vector<GrowthLink> growth_links(const PriceQuantityPanel& panel);

// Chain the links into an index series starting at 1 in the base year.
// An empty link list yields the base-year-only series.
IndexSeries chain(std::span<const double> links, int base_year, IndexKind kind);

// Same, but labels values with explicit years (years.size() == links.size()+1).
IndexSeries chain_over_years(std::span<const double> links,
                             std::span<const int> years, IndexKind kind);

// Fixed-base alternative: value at year t is the Tornqvist ratio between
// the base year and t directly. base_year < 0 selects the first panel year.
IndexSeries fixed_base_series(const PriceQuantityPanel& panel, ItemKind kind,
                              int base_year = -1);

// Renormalize so the value at new_base becomes exactly 1.
IndexSeries rebase(const IndexSeries& series, int new_base);

// Arithmetic mean of link values (the reporting convention for the
// "Average" summary row). A geometric variant is available as an option.
double average_annual_growth(std::span<const double> links);
double geometric_average_growth(std::span<const double> links);

}  // namespace farmgate
