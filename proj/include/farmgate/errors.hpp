#pragma once

#include <stdexcept>
#include <string>

namespace farmgate {

// Machine-checkable reason attached to every thrown error.
enum class Errc {
    // parse / validation
    parse_error,
    missing_cell,
    non_positive_price,
    negative_quantity,
    too_few_years,
    year_not_in_panel,
    zero_aggregate,
    share_sum,
    share_out_of_range,
    share_mismatch,
    year_pair_invalid,
    invalid_bounds,
    missing_elasticity,
    zero_share,
    numeraire_not_found,
    bad_config,
    non_positive_cost,
    non_positive_msp,
    non_positive_target,
    // computation
    undefined_ratio,
    non_positive_growth,
    empty_links,
    empty_contributions,
    non_positive_output,
    insufficient_observations,
    singular_system,
    // i/o
    io_failure,
};

const char* errc_name(Errc code) noexcept;

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& message)
        : std::runtime_error(message), code_(code) {}
    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

// Input files or in-memory data failed schema or invariant checks. CLI exit 1.
class ValidationError : public Error {
    using Error::Error;
};

// Malformed text that never produced a value. CLI exit 1.
class ParseError : public ValidationError {
    using ValidationError::ValidationError;
};

// Valid inputs for which the requested computation is not defined. CLI exit 2.
class ComputationError : public Error {
    using Error::Error;
};

// Filesystem trouble. CLI exit 3.
class IoError : public Error {
    using Error::Error;
};

}  // namespace farmgate
