#pragma once

#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "farmgate/data_model.hpp"

namespace farmgate {

struct PriceChange {
    ItemId item;
    double base_price = 0.0;
    double terminal_price = 0.0;
    double growth = 0.0;  // (terminal - base) / base
};

PriceChange make_price_change(ItemId item, double base_price,
                              double terminal_price);

struct NetEffectBounds {
    double lower = -2.0;
    double upper = 0.8;
};

// One crop's policy inputs: price movements for the output and each
// modeled input, the matching elasticities, and the benchmark costs.
struct PolicyScenario {
    std::string crop;
    std::vector<PriceChange> changes;
    std::map<std::string, double> elasticities;  // per item name
    double msp_cacp = 0.0;
    double cost_a2fl = 0.0;
    double cost_c2 = 0.0;
    NetEffectBounds bounds;
};

struct SspResult {
    std::vector<std::pair<std::string, double>> contributions;
    double net_effect_raw = 0.0;      // full-precision sum of contributions
    double net_effect_clamped = 0.0;  // two-decimal reported value, bounded
    bool was_clamped = false;
    double ssp = 0.0;
    double swaminathan_price = 0.0;
    double gap_cacp_vs_swaminathan_pct = 0.0;
    double gap_cacp_vs_ssp_pct = 0.0;
};

double price_growth(double base_price, double terminal_price);

double contribution(double growth, double elasticity);

double net_effect(std::span<const double> contributions);

std::pair<double, bool> clamp_net_effect(double raw, NetEffectBounds bounds);

// SSP = MSP * (1 - net effect), rounded to the nearest whole currency unit.
double strategic_support_price(double msp, double net_effect_clamped);

// C2 + 50%, rounded half-up to a whole currency unit.
double swaminathan_price(double cost_c2);

// (target - msp) / target * 100; the target price is the base.
double gap_percent(double target_price, double msp);

// growth -> contribution -> net effect -> bound -> SSP -> benchmark gaps.
// Contributions and the raw net effect carry full precision; the net
// effect is reported at two decimals and that reported value feeds the
// SSP formula, matching the published arithmetic.
SspResult evaluate_scenario(const PolicyScenario& scenario);

}  // namespace farmgate
