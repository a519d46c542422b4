#pragma once

// Deterministic random fixtures shared by the property tests and the
// acceptance suite.

#include <random>
#include <string>
#include <vector>

#include "farmgate/data_model.hpp"
#include "farmgate/translog.hpp"

namespace support {

// A complete positive panel with the requested shape; quantities are kept
// away from zero so every Tornqvist link is defined.
inline farmgate::RawPanel random_panel(std::mt19937_64& rng,
                                       std::size_t n_inputs,
                                       std::size_t n_outputs,
                                       std::size_t n_years,
                                       int first_year = 2010) {
    std::uniform_real_distribution<double> price(0.5, 20.0);
    std::uniform_real_distribution<double> qty(1.0, 50.0);
    farmgate::RawPanel raw;
    for (std::size_t i = 0; i < n_outputs; ++i)
        raw.items.push_back(
            {"out" + std::to_string(i), farmgate::ItemKind::Output});
    for (std::size_t i = 0; i < n_inputs; ++i)
        raw.items.push_back(
            {"in" + std::to_string(i), farmgate::ItemKind::Input});
    for (std::size_t t = 0; t < n_years; ++t)
        raw.years.push_back(first_year + static_cast<int>(t));
    raw.resize_cells();
    for (std::size_t i = 0; i < raw.items.size(); ++i)
        for (std::size_t t = 0; t < n_years; ++t) {
            raw.price_at(i, t) = price(rng);
            raw.quantity_at(i, t) = qty(rng);
        }
    return raw;
}

inline const std::vector<std::string>& canonical_inputs() {
    static const std::vector<std::string> names{"human_labour", "fertiliser",
                                                "machine_labour"};
    return names;
}

// Constraint-satisfying draw with first-order shares bounded away from the
// unit-interval edges and mild curvature, so synthetic observations keep
// their predicted shares inside [0,1].
inline farmgate::TranslogCoefficients random_coefficients(
    std::mt19937_64& rng,
    const std::vector<std::string>& inputs = canonical_inputs(),
    std::size_t numeraire_index = 2) {
    const std::size_t n = inputs.size();
    const std::size_t m = n - 1;
    std::uniform_real_distribution<double> base(0.5, 1.5);
    std::uniform_real_distribution<double> curvature(-0.04, 0.04);
    std::uniform_real_distribution<double> output_mix(-0.02, 0.02);
    std::uniform_real_distribution<double> level(0.0, 1.0);

    std::vector<double> raw_shares(n);
    double total = 0.0;
    for (double& v : raw_shares) {
        v = base(rng);
        total += v;
    }
    farmgate::TranslogCoefficients::Free free;
    free.alpha0 = level(rng);
    free.alpha_y = 0.8 + 0.4 * level(rng);
    free.alpha_yy = curvature(rng);
    std::size_t a = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (i == numeraire_index) continue;
        free.alpha_i.push_back(raw_shares[i] / total);
        free.alpha_iy.push_back(output_mix(rng));
        ++a;
    }
    for (std::size_t r = 0; r < m; ++r)
        for (std::size_t c = r; c < m; ++c)
            free.alpha_ij_upper.push_back(curvature(rng));
    return farmgate::TranslogCoefficients::from_free(inputs, numeraire_index,
                                                     free);
}

// Observations generated from the model itself. Share noise is projected
// onto the sum-zero subspace so each row still sums to one; rows whose
// shares leave (0.02, 0.98) are redrawn.
inline farmgate::CostDataset synthetic_dataset(
    const farmgate::TranslogCoefficients& coeffs, std::mt19937_64& rng,
    std::size_t n_obs, double cost_noise = 0.0, double share_noise = 0.0) {
    const std::size_t n = coeffs.input_count();
    std::normal_distribution<double> log_spread(0.0, 0.3);
    std::normal_distribution<double> noise(0.0, 1.0);

    std::vector<farmgate::CostObservation> observations;
    while (observations.size() < n_obs) {
        std::vector<double> w(n);
        for (double& wi : w) wi = std::exp(log_spread(rng));
        const double y = std::exp(log_spread(rng));
        const farmgate::ShareVector shares =
            farmgate::predicted_shares(coeffs, w, y);

        std::vector<double> s = shares.values();
        if (share_noise > 0.0) {
            std::vector<double> eps(n);
            double mean = 0.0;
            for (double& e : eps) {
                e = share_noise * noise(rng);
                mean += e / static_cast<double>(n);
            }
            for (std::size_t i = 0; i < n; ++i) s[i] += eps[i] - mean;
        }
        bool usable = true;
        for (double si : s) usable = usable && si > 0.02 && si < 0.98;
        if (!usable) continue;

        double log_cost = farmgate::predict_log_cost(coeffs, w, y);
        if (cost_noise > 0.0) log_cost += cost_noise * noise(rng);
        observations.push_back(farmgate::CostObservation{
            std::exp(log_cost), w, y,
            farmgate::ShareVector(coeffs.inputs(), std::move(s))});
    }
    return farmgate::make_cost_dataset(coeffs.inputs(),
                                       std::move(observations));
}

}  // namespace support
