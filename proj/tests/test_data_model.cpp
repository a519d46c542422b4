#include <doctest.h>

#include <random>

#include "farmgate/data_model.hpp"
#include "support.hpp"

using namespace farmgate;

namespace {

RawPanel two_by_two() {
    RawPanel raw;
    raw.items = {{"grain", ItemKind::Output}, {"labour", ItemKind::Input}};
    raw.years = {2010, 2011};
    raw.resize_cells();
    raw.price_at(0, 0) = 10.0;
    raw.price_at(0, 1) = 11.0;
    raw.quantity_at(0, 0) = 5.0;
    raw.quantity_at(0, 1) = 6.0;
    raw.price_at(1, 0) = 2.0;
    raw.price_at(1, 1) = 2.5;
    raw.quantity_at(1, 0) = 8.0;
    raw.quantity_at(1, 1) = 7.0;
    return raw;
}

}  // namespace

TEST_CASE("validate_panel accepts a complete positive panel unchanged") {
    const RawPanel raw = two_by_two();
    const PriceQuantityPanel panel = validate_panel(raw);
    CHECK(panel.items().size() == 2);
    CHECK(panel.years() == std::vector<int>{2010, 2011});
    CHECK(panel.price(0, 1) == 11.0);
    CHECK(panel.quantity(1, 0) == 8.0);
}

TEST_CASE("validate_panel is idempotent") {
    const PriceQuantityPanel panel = validate_panel(two_by_two());
    const PriceQuantityPanel again = validate_panel(panel.raw());
    CHECK(panel == again);
}

TEST_CASE("validate_panel rejects a zero price") {
    RawPanel raw = two_by_two();
    raw.price_at(1, 1) = 0.0;
    try {
        validate_panel(raw);
        FAIL("expected NonPositivePrice");
    } catch (const ValidationError& e) {
        CHECK(e.code() == Errc::non_positive_price);
        CHECK(std::string(e.what()).find("labour") != std::string::npos);
        CHECK(std::string(e.what()).find("2011") != std::string::npos);
    }
}

TEST_CASE("validate_panel rejects a single-year panel") {
    RawPanel raw = two_by_two();
    raw.years = {2010};
    raw.resize_cells();
    raw.price_at(0, 0) = raw.price_at(1, 0) = 1.0;
    raw.quantity_at(0, 0) = raw.quantity_at(1, 0) = 1.0;
    try {
        validate_panel(raw);
        FAIL("expected TooFewYears");
    } catch (const ValidationError& e) {
        CHECK(e.code() == Errc::too_few_years);
    }
}

TEST_CASE("validate_panel names the first missing cell") {
    RawPanel raw = two_by_two();
    raw.quantity_at(0, 1) = std::numeric_limits<double>::quiet_NaN();
    try {
        validate_panel(raw);
        FAIL("expected MissingCell");
    } catch (const ValidationError& e) {
        CHECK(e.code() == Errc::missing_cell);
        CHECK(std::string(e.what()).find("grain") != std::string::npos);
    }
}

TEST_CASE("validate_panel rejects negative quantities") {
    RawPanel raw = two_by_two();
    raw.quantity_at(1, 0) = -1.0;
    CHECK_THROWS_AS(validate_panel(raw), ValidationError);
}

TEST_CASE("validate_panel requires live outputs and inputs each year") {
    RawPanel raw = two_by_two();
    raw.quantity_at(0, 1) = 0.0;  // only output item has zero quantity
    try {
        validate_panel(raw);
        FAIL("expected ZeroAggregate");
    } catch (const ValidationError& e) {
        CHECK(e.code() == Errc::zero_aggregate);
    }
}

TEST_CASE("shares_from_panel handles the degenerate single item") {
    const PriceQuantityPanel panel = validate_panel(two_by_two());
    const ShareVector shares = shares_from_panel(panel, 2010, ItemKind::Input);
    CHECK(shares.size() == 1);
    CHECK(shares[0] == 1.0);
}

TEST_CASE("shares_from_panel splits equal values evenly") {
    RawPanel raw;
    raw.items = {{"a", ItemKind::Input},
                 {"b", ItemKind::Input},
                 {"out", ItemKind::Output}};
    raw.years = {2010, 2011};
    raw.resize_cells();
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t t = 0; t < 2; ++t) {
            raw.price_at(i, t) = 1.0;
            raw.quantity_at(i, t) = 1.0;
        }
    raw.price_at(0, 0) = 2.0;   // a: 2 * 3 = 6
    raw.quantity_at(0, 0) = 3.0;
    raw.price_at(1, 0) = 3.0;   // b: 3 * 2 = 6
    raw.quantity_at(1, 0) = 2.0;
    const ShareVector shares =
        shares_from_panel(validate_panel(raw), 2010, ItemKind::Input);
    CHECK(shares[0] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(shares[1] == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("shares_from_panel reproduces the published input-cost split") {
    // Values in the ratio 48:16:12:12:8:3:2; the published percentages are
    // each value over the 101-unit total, rounded to whole percent.
    const std::vector<double> weights{48, 16, 12, 12, 8, 3, 2};
    const std::vector<double> published{0.48, 0.16, 0.12, 0.12, 0.08, 0.03, 0.02};
    RawPanel raw;
    for (std::size_t i = 0; i < weights.size(); ++i)
        raw.items.push_back({"in" + std::to_string(i), ItemKind::Input});
    raw.items.push_back({"out", ItemKind::Output});
    raw.years = {2019, 2020};
    raw.resize_cells();
    for (std::size_t i = 0; i < raw.items.size(); ++i)
        for (std::size_t t = 0; t < 2; ++t) {
            raw.price_at(i, t) = 1.0;
            raw.quantity_at(i, t) = i < weights.size() ? weights[i] : 1.0;
        }
    const ShareVector shares =
        shares_from_panel(validate_panel(raw), 2019, ItemKind::Input);
    double sum = 0.0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        CHECK(shares[i] == doctest::Approx(weights[i] / 101.0).epsilon(1e-12));
        CHECK(std::fabs(shares[i] - published[i]) < 0.005);
        sum += shares[i];
    }
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("shares_from_panel rejects unknown years and dead aggregates") {
    const PriceQuantityPanel panel = validate_panel(two_by_two());
    CHECK_THROWS_AS(shares_from_panel(panel, 1999, ItemKind::Input),
                    ValidationError);
}

TEST_CASE("shares are invariant to common price scaling within a year") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 50; ++trial) {
        RawPanel raw = support::random_panel(rng, 4, 2, 3);
        const PriceQuantityPanel panel = validate_panel(raw);
        const ShareVector before =
            shares_from_panel(panel, raw.years[1], ItemKind::Input);

        const double scale = 3.25;
        for (std::size_t i = 0; i < raw.items.size(); ++i)
            raw.price_at(i, 1) *= scale;
        const ShareVector after =
            shares_from_panel(validate_panel(raw), raw.years[1],
                              ItemKind::Input);
        double sum = 0.0;
        for (std::size_t i = 0; i < before.size(); ++i) {
            CHECK(after[i] == doctest::Approx(before[i]).epsilon(1e-12));
            sum += after[i];
        }
        CHECK(std::fabs(sum - 1.0) <= 1e-9);
    }
}

TEST_CASE("ShareVector enforces the unit sum and optional range") {
    CHECK_THROWS_AS(ShareVector({"a", "b"}, {0.7, 0.7}), ValidationError);
    CHECK_NOTHROW(ShareVector({"a", "b"}, {1.3, -0.3}));  // sums to 1
    CHECK_THROWS_AS(ShareVector::validated({"a", "b"}, {1.3, -0.3}),
                    ValidationError);
    const ShareVector s({"a", "b"}, {1.3, -0.3});
    CHECK_FALSE(s.all_in_unit_interval());
    CHECK(s.at("a") == 1.3);
}

TEST_CASE("make_cost_dataset cross-checks shares against quantities") {
    const std::vector<std::string> inputs{"a", "b"};
    CostObservation obs{100.0, {2.0, 5.0}, 10.0,
                        ShareVector(inputs, {0.4, 0.6})};
    // consistent: 2*20/100 = 0.4, 5*12/100 = 0.6
    std::vector<std::vector<double>> good{{20.0, 12.0}};
    CHECK_NOTHROW(make_cost_dataset(inputs, {obs}, &good));
    std::vector<std::vector<double>> bad{{25.0, 12.0}};
    try {
        make_cost_dataset(inputs, {obs}, &bad);
        FAIL("expected ShareMismatch");
    } catch (const ValidationError& e) {
        CHECK(e.code() == Errc::share_mismatch);
    }
}
