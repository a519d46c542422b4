#include <doctest.h>

#include <random>

#include "farmgate/elasticities.hpp"
#include "farmgate/translog.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace farmgate;

namespace {

TranslogCoefficients cobb_douglas(const std::vector<double>& alpha_i_free,
                                  double alpha_y = 1.0, double alpha0 = 0.0) {
    TranslogCoefficients::Free free;
    free.alpha0 = alpha0;
    free.alpha_i = alpha_i_free;
    free.alpha_y = alpha_y;
    const std::size_t m = alpha_i_free.size();
    free.alpha_ij_upper.assign(m * (m + 1) / 2, 0.0);
    free.alpha_iy.assign(m, 0.0);
    std::vector<std::string> inputs;
    for (std::size_t i = 0; i <= m; ++i)
        inputs.push_back("x" + std::to_string(i));
    return TranslogCoefficients::from_free(inputs, m, free);
}

double max_free_difference(const TranslogCoefficients& a,
                           const TranslogCoefficients& b) {
    const auto fa = a.to_free();
    const auto fb = b.to_free();
    double worst = std::fabs(fa.alpha0 - fb.alpha0);
    auto scan = [&](const std::vector<double>& u, const std::vector<double>& v) {
        for (std::size_t i = 0; i < u.size(); ++i)
            worst = std::max(worst, std::fabs(u[i] - v[i]) /
                                        std::max(1.0, std::fabs(v[i])));
    };
    scan(fa.alpha_i, fb.alpha_i);
    scan(fa.alpha_ij_upper, fb.alpha_ij_upper);
    scan(fa.alpha_iy, fb.alpha_iy);
    worst = std::max(worst, std::fabs(fa.alpha_y - fb.alpha_y));
    worst = std::max(worst, std::fabs(fa.alpha_yy - fb.alpha_yy));
    return worst;
}

}  // namespace

TEST_CASE("from_free embeds the homogeneity constraints exactly") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 25; ++trial) {
        const TranslogCoefficients c = support::random_coefficients(rng);
        const std::size_t n = c.input_count();
        double sum_i = 0.0, sum_iy = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            sum_i += c.alpha_i(i);
            sum_iy += c.alpha_iy(i);
            double row = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
                row += c.alpha_ij(i, j);
                CHECK(c.alpha_ij(i, j) == c.alpha_ij(j, i));  // bitwise
            }
            CHECK(std::fabs(row) <= 1e-10);
        }
        CHECK(std::fabs(sum_i - 1.0) <= 1e-10);
        CHECK(std::fabs(sum_iy) <= 1e-10);
    }
}

TEST_CASE("predict_log_cost vanishes when every log is zero") {
    const TranslogCoefficients c = cobb_douglas({1.0, 0.0}, 1.0);
    const std::vector<double> w{1.0, 1.0, 1.0};
    CHECK(predict_log_cost(c, w, 1.0) == doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("predict_log_cost on unit logs sums first-order terms") {
    const TranslogCoefficients c = cobb_douglas({0.5}, 1.0);
    const double e = std::exp(1.0);
    const std::vector<double> w{e, e};
    CHECK(predict_log_cost(c, w, e) == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("predict_log_cost agrees with the term-by-term oracle") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> spread(0.2, 5.0);
    for (int trial = 0; trial < 25; ++trial) {
        const TranslogCoefficients c = support::random_coefficients(rng);
        const std::size_t n = c.input_count();
        std::vector<double> w(n), ai(n), aiy(n);
        std::vector<std::vector<double>> aij(n, std::vector<double>(n));
        for (std::size_t i = 0; i < n; ++i) {
            w[i] = spread(rng);
            ai[i] = c.alpha_i(i);
            aiy[i] = c.alpha_iy(i);
            for (std::size_t j = 0; j < n; ++j) aij[i][j] = c.alpha_ij(i, j);
        }
        const double y = spread(rng);
        const double expected = oracle::translog_log_cost(
            c.alpha0(), ai, c.alpha_y(), aij, c.alpha_yy(), aiy, w, y);
        CHECK(predict_log_cost(c, w, y) ==
              doctest::Approx(expected).epsilon(1e-12));
    }
}

TEST_CASE("predict_log_cost rejects non-positive points") {
    const TranslogCoefficients c = cobb_douglas({0.5});
    CHECK_THROWS_AS(predict_log_cost(c, std::vector<double>{1.0, 0.0}, 1.0),
                    ValidationError);
    CHECK_THROWS_AS(predict_log_cost(c, std::vector<double>{1.0, 1.0}, -1.0),
                    ValidationError);
}

TEST_CASE("predicted shares collapse to alpha_i where logs vanish") {
    std::mt19937_64 rng(29);
    const TranslogCoefficients c = support::random_coefficients(rng);
    const std::vector<double> w(c.input_count(), 1.0);
    const ShareVector s = predicted_shares(c, w, 1.0);
    for (std::size_t i = 0; i < c.input_count(); ++i)
        CHECK(s[i] == doctest::Approx(c.alpha_i(i)).epsilon(1e-15));
}

TEST_CASE("Cobb-Douglas shares are constant everywhere") {
    const TranslogCoefficients c = cobb_douglas({0.3});
    const ShareVector s =
        predicted_shares(c, std::vector<double>{12.5, 0.04}, 9.0);
    CHECK(s[0] == doctest::Approx(0.3).epsilon(1e-12));
    CHECK(s[1] == doctest::Approx(0.7).epsilon(1e-12));
}

TEST_CASE("shares outside the unit interval are flagged, never clamped") {
    TranslogCoefficients::Free free;
    free.alpha0 = 0.0;
    free.alpha_i = {0.2};
    free.alpha_y = 1.0;
    free.alpha_ij_upper = {0.3};  // strong curvature
    free.alpha_yy = 0.0;
    free.alpha_iy = {0.0};
    const TranslogCoefficients c =
        TranslogCoefficients::from_free({"a", "b"}, 1, free);
    const ShareVector s =
        predicted_shares(c, std::vector<double>{50.0, 1.0}, 1.0);
    CHECK_FALSE(s.all_in_unit_interval());
    CHECK(s[0] > 1.0);
    double sum = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) sum += s[i];
    CHECK(std::fabs(sum - 1.0) <= 1e-10);
}

TEST_CASE("predicted shares sum to one for any constrained coefficients") {
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> spread(0.1, 8.0);
    for (int trial = 0; trial < 40; ++trial) {
        const TranslogCoefficients c = support::random_coefficients(rng);
        std::vector<double> w(c.input_count());
        for (double& wi : w) wi = spread(rng);
        const ShareVector s = predicted_shares(c, w, spread(rng));
        double sum = 0.0;
        for (std::size_t i = 0; i < s.size(); ++i) sum += s[i];
        CHECK(std::fabs(sum - 1.0) <= 1e-10);
    }
}

TEST_CASE("normalize_by_numeraire divides by the chosen input price") {
    const std::vector<std::string> inputs{"a", "b", "c"};
    CostObservation obs{16.0, {2.0, 4.0, 8.0}, 3.0,
                        ShareVector(inputs, {0.25, 0.25, 0.5})};
    const CostDataset data = make_cost_dataset(inputs, {obs});

    const CostDataset by_first = normalize_by_numeraire(data, "a");
    CHECK(by_first.observations[0].input_prices ==
          std::vector<double>{1.0, 2.0, 4.0});
    CHECK(by_first.observations[0].total_cost == 8.0);

    CHECK_THROWS_AS(normalize_by_numeraire(data, "nope"), ValidationError);
}

TEST_CASE("normalization round-trips the cost prediction") {
    std::mt19937_64 rng(41);
    std::uniform_real_distribution<double> spread(0.3, 4.0);
    const TranslogCoefficients c = support::random_coefficients(rng);
    const std::size_t k = c.numeraire_index();
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<double> w(c.input_count());
        for (double& wi : w) wi = spread(rng);
        const double y = spread(rng);
        std::vector<double> rel = w;
        for (double& wi : rel) wi /= w[k];
        const double normalized = predict_log_cost(c, rel, y);
        const double original = predict_log_cost(c, w, y);
        CHECK(std::fabs(normalized + std::log(w[k]) - original) <= 1e-12);
    }
}

TEST_CASE("fitted cost function is homogeneous of degree one in prices") {
    std::mt19937_64 rng(43);
    std::uniform_real_distribution<double> spread(0.3, 4.0);
    for (int trial = 0; trial < 20; ++trial) {
        const TranslogCoefficients c = support::random_coefficients(rng);
        std::vector<double> w(c.input_count());
        for (double& wi : w) wi = spread(rng);
        const double y = spread(rng);
        const double scale = 2.9;
        std::vector<double> scaled = w;
        for (double& wi : scaled) wi *= scale;
        CHECK(std::fabs(predict_log_cost(c, scaled, y) - std::log(scale) -
                        predict_log_cost(c, w, y)) <= 1e-10);
    }
}

TEST_CASE("analytic shares match central finite differences of log cost") {
    std::mt19937_64 rng(47);
    std::uniform_real_distribution<double> spread(0.4, 3.0);
    for (int trial = 0; trial < 20; ++trial) {
        const TranslogCoefficients c = support::random_coefficients(rng);
        const std::size_t n = c.input_count();
        std::vector<double> w(n);
        for (double& wi : w) wi = spread(rng);
        const double y = spread(rng);
        const ShareVector s = predicted_shares(c, w, y);
        for (std::size_t i = 0; i < n; ++i) {
            const double fd = oracle::central_log_derivative(
                [&](double wi) {
                    std::vector<double> probe = w;
                    probe[i] = wi;
                    return predict_log_cost(c, probe, y);
                },
                w[i]);
            CHECK(std::fabs(fd - s[i]) <= 1e-6);
        }
    }
}

TEST_CASE("noiseless synthetic data round-trips through fit") {
    std::mt19937_64 rng(53);
    for (int seed = 0; seed < 5; ++seed) {
        const TranslogCoefficients truth = support::random_coefficients(rng);
        const CostDataset data = support::synthetic_dataset(truth, rng, 50);
        for (Estimator estimator :
             {Estimator::IteratedFeasibleGls, Estimator::StackedRestrictedLs}) {
            EstimationOptions options;
            options.estimator = estimator;
            options.numeraire = truth.numeraire();
            const FitReport report = fit(data, options);
            CHECK(report.converged);
            CHECK(report.iterations_used <= options.max_iterations);
            CHECK(report.sample_size == 50);
            CHECK(max_free_difference(report.coefficients, truth) <= 1e-6);
            for (double rv : report.residual_variance_per_equation)
                CHECK(rv <= 1e-16);
        }
    }
}

TEST_CASE("Cobb-Douglas data with mild noise keeps second-order terms small") {
    std::mt19937_64 rng(59);
    const TranslogCoefficients truth = cobb_douglas({0.5, 0.3}, 1.0, 0.2);
    const CostDataset data =
        support::synthetic_dataset(truth, rng, 200, 1e-3, 1e-3);
    EstimationOptions options;
    options.numeraire = truth.numeraire();
    const FitReport report = fit(data, options);
    CHECK(report.converged);
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j)
            CHECK(std::fabs(report.coefficients.alpha_ij(i, j)) < 0.02);
    CHECK(std::fabs(report.coefficients.alpha_yy()) < 0.02);
}

TEST_CASE("fit reports insufficient observations") {
    std::mt19937_64 rng(61);
    const TranslogCoefficients truth = support::random_coefficients(rng);
    const CostDataset data = support::synthetic_dataset(truth, rng, 9);
    EstimationOptions options;  // 10 free parameters for 3 inputs
    try {
        fit(data, options);
        FAIL("expected InsufficientObservations");
    } catch (const ComputationError& e) {
        CHECK(e.code() == Errc::insufficient_observations);
    }
}

TEST_CASE("fit flags collinear regressors as singular") {
    std::mt19937_64 rng(67);
    const TranslogCoefficients truth = support::random_coefficients(rng);
    CostDataset data = support::synthetic_dataset(truth, rng, 1);
    const CostObservation repeated = data.observations[0];
    data.observations.assign(40, repeated);
    EstimationOptions options;
    try {
        fit(data, options);
        FAIL("expected SingularSystem");
    } catch (const ComputationError& e) {
        CHECK(e.code() == Errc::singular_system);
    }
}

TEST_CASE("estimate is invariant to the dropped share equation") {
    std::mt19937_64 rng(71);
    const TranslogCoefficients truth = support::random_coefficients(rng);
    const CostDataset data =
        support::synthetic_dataset(truth, rng, 120, 5e-3, 5e-3);

    EstimationOptions options;
    options.numeraire = truth.numeraire();
    options.convergence_tol = 1e-12;
    options.max_iterations = 500;

    options.dropped_share_equation = data.inputs[2];  // the numeraire
    const FitReport drop_numeraire = fit(data, options);
    options.dropped_share_equation = data.inputs[0];
    const FitReport drop_first = fit(data, options);

    CHECK(drop_numeraire.converged);
    CHECK(drop_first.converged);
    CHECK(max_free_difference(drop_numeraire.coefficients,
                              drop_first.coefficients) <= 1e-8);
}

TEST_CASE("rescaling one input's measurement unit moves only alpha0/alpha_i") {
    std::mt19937_64 rng(73);
    const TranslogCoefficients truth = support::random_coefficients(rng);
    const CostDataset data =
        support::synthetic_dataset(truth, rng, 90, 2e-3, 2e-3);

    CostDataset rescaled = data;
    const double unit = 3.7;
    for (CostObservation& obs : rescaled.observations)
        obs.input_prices[0] *= unit;

    EstimationOptions options;
    options.numeraire = truth.numeraire();
    options.convergence_tol = 1e-12;
    options.max_iterations = 500;
    const FitReport before = fit(data, options);
    const FitReport after = fit(rescaled, options);

    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(std::fabs(before.coefficients.alpha_iy(i) -
                        after.coefficients.alpha_iy(i)) <= 1e-8);
        for (std::size_t j = 0; j < 3; ++j)
            CHECK(std::fabs(before.coefficients.alpha_ij(i, j) -
                            after.coefficients.alpha_ij(i, j)) <= 1e-8);
    }
    CHECK(std::fabs(before.coefficients.alpha_yy() -
                    after.coefficients.alpha_yy()) <= 1e-8);

    // first-order terms absorb the unit change exactly:
    //   alpha_y  -> alpha_y  - alpha_0y  ln c
    //   alpha_i  -> alpha_i  - alpha_i0  ln c
    const double shift = std::log(unit);
    CHECK(std::fabs(after.coefficients.alpha_y() -
                    (before.coefficients.alpha_y() -
                     before.coefficients.alpha_iy(0) * shift)) <= 1e-8);
    for (std::size_t i = 0; i < 3; ++i)
        CHECK(std::fabs(after.coefficients.alpha_i(i) -
                        (before.coefficients.alpha_i(i) -
                         before.coefficients.alpha_ij(i, 0) * shift)) <= 1e-8);

    // derived elasticities at corresponding evaluation points are unchanged
    std::vector<double> w{1.2, 0.8, 1.5};
    const double y = 1.3;
    const ShareVector shares = predicted_shares(before.coefficients, w, y);
    const ElasticityReport base_report =
        full_report(before.coefficients, shares, y, w);
    std::vector<double> w_scaled = w;
    w_scaled[0] *= unit;
    const ElasticityReport scaled_report =
        full_report(after.coefficients, shares, y, w_scaled);
    for (Eigen::Index i = 0; i < 3; ++i) {
        CHECK(std::fabs(base_report.output_elasticity[static_cast<std::size_t>(
                            i)] -
                        scaled_report.output_elasticity
                            [static_cast<std::size_t>(i)]) <= 1e-8);
        for (Eigen::Index j = 0; j < 3; ++j)
            CHECK(std::fabs(base_report.price(i, j) -
                            scaled_report.price(i, j)) <= 1e-8);
    }
}

TEST_CASE("unconverged fits return the best iterate and say so") {
    std::mt19937_64 rng(79);
    const TranslogCoefficients truth = support::random_coefficients(rng);
    const CostDataset data =
        support::synthetic_dataset(truth, rng, 60, 5e-3, 5e-3);
    EstimationOptions options;
    options.numeraire = truth.numeraire();
    options.convergence_tol = 1e-16;
    options.max_iterations = 1;
    const FitReport report = fit(data, options);
    CHECK_FALSE(report.converged);
    CHECK(report.iterations_used == 1);
    CHECK(max_free_difference(report.coefficients, truth) < 0.5);
}

TEST_CASE("from_checked verifies and mirrors a full coefficient set") {
    std::mt19937_64 rng(83);
    const TranslogCoefficients c = support::random_coefficients(rng);
    const std::size_t n = c.input_count();
    Eigen::MatrixXd aij = c.alpha_ij_matrix();
    std::vector<double> ai(n), aiy(n);
    for (std::size_t i = 0; i < n; ++i) {
        ai[i] = c.alpha_i(i);
        aiy[i] = c.alpha_iy(i);
    }
    const TranslogCoefficients again = TranslogCoefficients::from_checked(
        c.inputs(), c.numeraire(), c.alpha0(), ai, c.alpha_y(), aij,
        c.alpha_yy(), aiy);
    CHECK(max_free_difference(again, c) == 0.0);

    Eigen::MatrixXd broken = aij;
    broken(0, 1) += 0.01;  // breaks symmetry and the row sums
    CHECK_THROWS_AS(
        TranslogCoefficients::from_checked(c.inputs(), c.numeraire(),
                                           c.alpha0(), ai, c.alpha_y(), broken,
                                           c.alpha_yy(), aiy),
        ValidationError);
}
