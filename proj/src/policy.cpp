#include "farmgate/policy.hpp"

#include <cmath>

#include "farmgate/numeric.hpp"

namespace farmgate {

PriceChange make_price_change(ItemId item, double base_price,
                              double terminal_price) {
    return PriceChange{std::move(item), base_price, terminal_price,
                       price_growth(base_price, terminal_price)};
}

double price_growth(double base_price, double terminal_price) {
    if (!(base_price > 0.0) || !(terminal_price > 0.0) ||
        !std::isfinite(base_price) || !std::isfinite(terminal_price))
        throw ValidationError(Errc::non_positive_price,
                              "prices must be positive to compute growth");
    return (terminal_price - base_price) / base_price;
}

double contribution(double growth, double elasticity) {
    return growth * elasticity;
}

double net_effect(std::span<const double> contributions) {
    if (contributions.empty())
        throw ComputationError(Errc::empty_contributions,
                               "no contributions to sum");
    double sum = 0.0;
    for (double c : contributions) sum += c;
    return sum;
}

std::pair<double, bool> clamp_net_effect(double raw, NetEffectBounds bounds) {
    if (!(bounds.lower < bounds.upper))
        throw ValidationError(Errc::invalid_bounds,
                              "net-effect bounds must satisfy lower < upper");
    if (raw < bounds.lower) return {bounds.lower, true};
    if (raw > bounds.upper) return {bounds.upper, true};
    return {raw, false};
}

double strategic_support_price(double msp, double net_effect_clamped) {
    if (!(msp > 0.0) || !std::isfinite(msp))
        throw ValidationError(Errc::non_positive_msp, "MSP must be positive");
    return round_currency(msp * (1.0 - net_effect_clamped));
}

double swaminathan_price(double cost_c2) {
    if (!(cost_c2 > 0.0) || !std::isfinite(cost_c2))
        throw ValidationError(Errc::non_positive_cost,
                              "cost C2 must be positive");
    return round_currency(1.5 * cost_c2);
}

double gap_percent(double target_price, double msp) {
    if (!(target_price > 0.0) || !std::isfinite(target_price))
        throw ValidationError(Errc::non_positive_target,
                              "target price must be positive");
    return (target_price - msp) / target_price * 100.0;
}

SspResult evaluate_scenario(const PolicyScenario& scenario) {
    if (!(scenario.bounds.lower < scenario.bounds.upper))
        throw ValidationError(Errc::invalid_bounds,
                              "net-effect bounds must satisfy lower < upper");
    if (scenario.changes.empty())
        throw ComputationError(Errc::empty_contributions,
                               "scenario lists no price changes");
    if (!(scenario.msp_cacp > 0.0))
        throw ValidationError(Errc::non_positive_msp,
                              "scenario MSP must be positive");
    if (!(scenario.cost_c2 > 0.0))
        throw ValidationError(Errc::non_positive_cost,
                              "scenario cost C2 must be positive");

    SspResult result;
    std::vector<double> contribs;
    for (const PriceChange& change : scenario.changes) {
        const auto it = scenario.elasticities.find(change.item.name);
        if (it == scenario.elasticities.end())
            throw ValidationError(Errc::missing_elasticity,
                                  "no elasticity for item '" + change.item.name +
                                      "'");
        const double growth = price_growth(change.base_price,
                                           change.terminal_price);
        const double c = contribution(growth, it->second);
        contribs.push_back(c);
        result.contributions.emplace_back(change.item.name, c);
    }

    result.net_effect_raw = net_effect(contribs);
    const double reported = round_2dp(result.net_effect_raw);
    const auto [clamped, was_clamped] =
        clamp_net_effect(reported, scenario.bounds);
    result.net_effect_clamped = clamped;
    result.was_clamped = was_clamped;
    result.ssp = strategic_support_price(scenario.msp_cacp, clamped);
    result.swaminathan_price = swaminathan_price(scenario.cost_c2);
    result.gap_cacp_vs_swaminathan_pct =
        gap_percent(result.swaminathan_price, scenario.msp_cacp);
    result.gap_cacp_vs_ssp_pct = gap_percent(result.ssp, scenario.msp_cacp);
    return result;
}

}  // namespace farmgate
