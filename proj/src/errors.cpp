#include "farmgate/errors.hpp"

namespace farmgate {

const char* errc_name(Errc code) noexcept {
    switch (code) {
        case Errc::parse_error: return "ParseError";
        case Errc::missing_cell: return "MissingCell";
        case Errc::non_positive_price: return "NonPositivePrice";
        case Errc::negative_quantity: return "NegativeQuantity";
        case Errc::too_few_years: return "TooFewYears";
        case Errc::year_not_in_panel: return "YearNotInPanel";
        case Errc::zero_aggregate: return "ZeroAggregate";
        case Errc::share_sum: return "ShareSum";
        case Errc::share_out_of_range: return "ShareOutOfRange";
        case Errc::share_mismatch: return "ShareMismatch";
        case Errc::year_pair_invalid: return "YearPairInvalid";
        case Errc::invalid_bounds: return "InvalidBounds";
        case Errc::missing_elasticity: return "MissingElasticity";
        case Errc::zero_share: return "ZeroShare";
        case Errc::numeraire_not_found: return "NumeraireNotFound";
        case Errc::bad_config: return "BadConfig";
        case Errc::non_positive_cost: return "NonPositiveCost";
        case Errc::non_positive_msp: return "NonPositiveMsp";
        case Errc::non_positive_target: return "NonPositiveTarget";
        case Errc::undefined_ratio: return "UndefinedRatio";
        case Errc::non_positive_growth: return "NonPositiveGrowth";
        case Errc::empty_links: return "EmptyLinks";
        case Errc::empty_contributions: return "EmptyContributions";
        case Errc::non_positive_output: return "NonPositiveOutput";
        case Errc::insufficient_observations: return "InsufficientObservations";
        case Errc::singular_system: return "SingularSystem";
        case Errc::io_failure: return "IoFailure";
    }
    return "Error";
}

}  // namespace farmgate
