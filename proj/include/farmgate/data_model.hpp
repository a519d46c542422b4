#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "farmgate/errors.hpp"

namespace farmgate {

enum class ItemKind { Input, Output };

const char* item_kind_name(ItemKind kind) noexcept;

struct ItemId {
    std::string name;
    ItemKind kind = ItemKind::Input;

    bool operator==(const ItemId&) const = default;
};

// Unvalidated panel as assembled from a file or built by hand.
// Cell layout is row = item, column = year; NaN marks a missing cell.
struct RawPanel {
    std::vector<ItemId> items;
    std::vector<int> years;
    std::vector<double> prices;      // items.size() * years.size()
    std::vector<double> quantities;  // items.size() * years.size()

    double& price_at(std::size_t item, std::size_t year);
    double& quantity_at(std::size_t item, std::size_t year);
    void resize_cells();  // sizes the cell arrays to items x years, all NaN
};

// Per-item, per-year prices and quantities for inputs and outputs.
// Immutable once validated; all invariants checked by validate_panel.
class PriceQuantityPanel {
public:
    const std::vector<ItemId>& items() const { return items_; }
    const std::vector<int>& years() const { return years_; }
    std::size_t item_count() const { return items_.size(); }
    std::size_t year_count() const { return years_.size(); }

    double price(std::size_t item, std::size_t year) const {
        return prices_[item * years_.size() + year];
    }
    double quantity(std::size_t item, std::size_t year) const {
        return quantities_[item * years_.size() + year];
    }

    std::optional<std::size_t> year_index(int year) const;
    std::vector<std::size_t> items_of_kind(ItemKind kind) const;

    RawPanel raw() const;  // loss-free back-conversion

    bool operator==(const PriceQuantityPanel&) const = default;

    friend PriceQuantityPanel validate_panel(const RawPanel& raw);

private:
    PriceQuantityPanel() = default;

    std::vector<ItemId> items_;
    std::vector<int> years_;
    std::vector<double> prices_;
    std::vector<double> quantities_;
};

// Named value shares. Construction always enforces a unit sum (1e-9);
// the [0,1] range is enforced only by the `validated` factory, because
// translog-predicted shares may legitimately leave the unit interval.
class ShareVector {
public:
    ShareVector(std::vector<std::string> names, std::vector<double> values);

    static ShareVector validated(std::vector<std::string> names,
                                 std::vector<double> values);

    std::size_t size() const { return values_.size(); }
    double operator[](std::size_t i) const { return values_[i]; }
    double at(const std::string& name) const;
    const std::vector<std::string>& names() const { return names_; }
    const std::vector<double>& values() const { return values_; }
    bool all_in_unit_interval() const;

    bool operator==(const ShareVector&) const = default;

private:
    std::vector<std::string> names_;
    std::vector<double> values_;
};

// One row of a translog estimation sample.
struct CostObservation {
    double total_cost = 0.0;
    std::vector<double> input_prices;  // aligned with CostDataset::inputs
    double output_level = 0.0;
    ShareVector cost_shares;
};

struct CostDataset {
    std::vector<std::string> inputs;
    std::vector<CostObservation> observations;
};

// Checks every CostObservation invariant; optional per-observation input
// quantities cross-check the shares against w_i * x_i / C at 1e-6.
CostDataset make_cost_dataset(
    std::vector<std::string> inputs,
    std::vector<CostObservation> observations,
    const std::vector<std::vector<double>>* input_quantities = nullptr);

enum class IndexKind { Input, Output, TFP };

const char* index_kind_name(IndexKind kind) noexcept;

// Index values keyed by year; the value at base_year is exactly 1.
struct IndexSeries {
    IndexKind kind = IndexKind::TFP;
    int base_year = 0;
    std::vector<int> years;
    std::vector<double> values;
};

PriceQuantityPanel validate_panel(const RawPanel& raw);

ShareVector shares_from_panel(const PriceQuantityPanel& panel, int year,
                              ItemKind kind);

}  // namespace farmgate
