#include "farmgate/data_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace farmgate {

namespace {

constexpr double kShareSumTol = 1e-9;
constexpr double kShareReconstructTol = 1e-6;

std::string cell_label(const ItemId& item, int year) {
    return "item '" + item.name + "', year " + std::to_string(year);
}

}  // namespace

const char* item_kind_name(ItemKind kind) noexcept {
    return kind == ItemKind::Input ? "input" : "output";
}

const char* index_kind_name(IndexKind kind) noexcept {
    switch (kind) {
        case IndexKind::Input: return "input";
        case IndexKind::Output: return "output";
        default: return "tfp";
    }
}

void RawPanel::resize_cells() {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    prices.assign(items.size() * years.size(), nan);
    quantities.assign(items.size() * years.size(), nan);
}

double& RawPanel::price_at(std::size_t item, std::size_t year) {
    return prices[item * years.size() + year];
}

double& RawPanel::quantity_at(std::size_t item, std::size_t year) {
    return quantities[item * years.size() + year];
}

std::optional<std::size_t> PriceQuantityPanel::year_index(int year) const {
    auto it = std::find(years_.begin(), years_.end(), year);
    if (it == years_.end()) return std::nullopt;
    return static_cast<std::size_t>(it - years_.begin());
}

std::vector<std::size_t> PriceQuantityPanel::items_of_kind(ItemKind kind) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < items_.size(); ++i)
        if (items_[i].kind == kind) out.push_back(i);
    return out;
}

RawPanel PriceQuantityPanel::raw() const {
    RawPanel r;
    r.items = items_;
    r.years = years_;
    r.prices = prices_;
    r.quantities = quantities_;
    return r;
}

PriceQuantityPanel validate_panel(const RawPanel& raw) {
    if (raw.years.size() < 2)
        throw ValidationError(Errc::too_few_years,
                              "panel needs at least 2 years, got " +
                                  std::to_string(raw.years.size()));
    for (std::size_t t = 1; t < raw.years.size(); ++t)
        if (raw.years[t] <= raw.years[t - 1])
            throw ValidationError(Errc::too_few_years,
                                  "panel years must be strictly increasing near " +
                                      std::to_string(raw.years[t]));
    if (raw.items.empty())
        throw ValidationError(Errc::bad_config, "panel has no items");
    for (std::size_t i = 0; i < raw.items.size(); ++i) {
        if (raw.items[i].name.empty())
            throw ValidationError(Errc::bad_config, "item with empty name");
        for (std::size_t j = i + 1; j < raw.items.size(); ++j)
            if (raw.items[i].name == raw.items[j].name)
                throw ValidationError(Errc::bad_config,
                                      "duplicate item name '" + raw.items[i].name + "'");
    }

    const std::size_t cells = raw.items.size() * raw.years.size();
    if (raw.prices.size() != cells || raw.quantities.size() != cells)
        throw ValidationError(Errc::missing_cell, "panel cell arrays are not items x years");

    // Scan item-major so "first violated cell" is deterministic.
    for (std::size_t i = 0; i < raw.items.size(); ++i) {
        for (std::size_t t = 0; t < raw.years.size(); ++t) {
            const double p = raw.prices[i * raw.years.size() + t];
            const double q = raw.quantities[i * raw.years.size() + t];
            const std::string where = cell_label(raw.items[i], raw.years[t]);
            if (std::isnan(p) || std::isnan(q))
                throw ValidationError(Errc::missing_cell, "missing cell at " + where);
            if (!(p > 0.0) || !std::isfinite(p))
                throw ValidationError(Errc::non_positive_price,
                                      "non-positive price at " + where);
            if (q < 0.0 || !std::isfinite(q))
                throw ValidationError(Errc::negative_quantity,
                                      "negative quantity at " + where);
        }
    }

    // Each year needs live output and live input quantities.
    for (std::size_t t = 0; t < raw.years.size(); ++t) {
        bool any_output = false, any_input = false;
        for (std::size_t i = 0; i < raw.items.size(); ++i) {
            const double q = raw.quantities[i * raw.years.size() + t];
            if (q > 0.0) {
                (raw.items[i].kind == ItemKind::Output ? any_output : any_input) = true;
            }
        }
        if (!any_output || !any_input)
            throw ValidationError(
                Errc::zero_aggregate,
                std::string("year ") + std::to_string(raw.years[t]) +
                    " has no positive " + (!any_output ? "output" : "input") +
                    " quantity");
    }

    PriceQuantityPanel panel;
    panel.items_ = raw.items;
    panel.years_ = raw.years;
    panel.prices_ = raw.prices;
    panel.quantities_ = raw.quantities;
    return panel;
}

ShareVector::ShareVector(std::vector<std::string> names, std::vector<double> values)
    : names_(std::move(names)), values_(std::move(values)) {
    if (names_.size() != values_.size())
        throw ValidationError(Errc::share_sum, "share names/values size mismatch");
    if (values_.empty())
        throw ValidationError(Errc::share_sum, "empty share vector");
    double sum = 0.0;
    for (double v : values_) {
        if (!std::isfinite(v))
            throw ValidationError(Errc::share_sum, "non-finite share");
        sum += v;
    }
    if (std::fabs(sum - 1.0) > kShareSumTol)
        throw ValidationError(Errc::share_sum,
                              "shares sum to " + std::to_string(sum) + ", expected 1");
}

ShareVector ShareVector::validated(std::vector<std::string> names,
                                   std::vector<double> values) {
    ShareVector sv(std::move(names), std::move(values));
    for (std::size_t i = 0; i < sv.size(); ++i)
        if (sv.values_[i] < 0.0 || sv.values_[i] > 1.0)
            throw ValidationError(Errc::share_out_of_range,
                                  "share '" + sv.names_[i] + "' = " +
                                      std::to_string(sv.values_[i]) +
                                      " outside [0,1]");
    return sv;
}

double ShareVector::at(const std::string& name) const {
    for (std::size_t i = 0; i < names_.size(); ++i)
        if (names_[i] == name) return values_[i];
    throw ValidationError(Errc::share_out_of_range, "no share named '" + name + "'");
}

bool ShareVector::all_in_unit_interval() const {
    return std::all_of(values_.begin(), values_.end(),
                       [](double v) { return v >= 0.0 && v <= 1.0; });
}

ShareVector shares_from_panel(const PriceQuantityPanel& panel, int year,
                              ItemKind kind) {
    const auto t = panel.year_index(year);
    if (!t)
        throw ValidationError(Errc::year_not_in_panel,
                              "year " + std::to_string(year) + " not in panel");
    const auto idx = panel.items_of_kind(kind);
    if (idx.empty())
        throw ValidationError(Errc::zero_aggregate,
                              std::string("panel has no ") + item_kind_name(kind) +
                                  " items");
    std::vector<std::string> names;
    std::vector<double> values;
    double total = 0.0;
    for (std::size_t i : idx) {
        const double v = panel.price(i, *t) * panel.quantity(i, *t);
        names.push_back(panel.items()[i].name);
        values.push_back(v);
        total += v;
    }
    if (total <= 0.0)
        throw ValidationError(Errc::zero_aggregate,
                              std::string("all ") + item_kind_name(kind) +
                                  " values are zero in year " + std::to_string(year));
    for (double& v : values) v /= total;
    return ShareVector::validated(std::move(names), std::move(values));
}

CostDataset make_cost_dataset(
    std::vector<std::string> inputs,
    std::vector<CostObservation> observations,
    const std::vector<std::vector<double>>* input_quantities) {
    if (inputs.size() < 2)
        throw ValidationError(Errc::insufficient_observations,
                              "cost dataset needs at least 2 inputs");
    if (input_quantities && input_quantities->size() != observations.size())
        throw ValidationError(Errc::share_mismatch,
                              "input quantities rows do not match observations");
    for (std::size_t o = 0; o < observations.size(); ++o) {
        const CostObservation& obs = observations[o];
        const std::string where = "observation " + std::to_string(o);
        if (!(obs.total_cost > 0.0) || !std::isfinite(obs.total_cost))
            throw ValidationError(Errc::non_positive_cost,
                                  where + ": total cost must be positive");
        if (!(obs.output_level > 0.0) || !std::isfinite(obs.output_level))
            throw ValidationError(Errc::non_positive_output,
                                  where + ": output level must be positive");
        if (obs.input_prices.size() != inputs.size() ||
            obs.cost_shares.size() != inputs.size())
            throw ValidationError(Errc::share_mismatch,
                                  where + ": fields not aligned with input list");
        for (std::size_t i = 0; i < inputs.size(); ++i) {
            if (!(obs.input_prices[i] > 0.0) ||
                !std::isfinite(obs.input_prices[i]))
                throw ValidationError(Errc::non_positive_price,
                                      where + ": non-positive price for '" +
                                          inputs[i] + "'");
            if (obs.cost_shares[i] < 0.0 || obs.cost_shares[i] > 1.0)
                throw ValidationError(Errc::share_out_of_range,
                                      where + ": share for '" + inputs[i] +
                                          "' outside [0,1]");
        }
        if (input_quantities) {
            const auto& q = (*input_quantities)[o];
            if (q.size() != inputs.size())
                throw ValidationError(Errc::share_mismatch,
                                      where + ": quantity row not aligned");
            for (std::size_t i = 0; i < inputs.size(); ++i) {
                const double implied = obs.input_prices[i] * q[i] / obs.total_cost;
                if (std::fabs(implied - obs.cost_shares[i]) > kShareReconstructTol)
                    throw ValidationError(
                        Errc::share_mismatch,
                        where + ": share for '" + inputs[i] +
                            "' disagrees with w*x/C by more than 1e-6");
            }
        }
    }
    return CostDataset{std::move(inputs), std::move(observations)};
}

}  // namespace farmgate
