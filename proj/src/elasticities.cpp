#include "farmgate/elasticities.hpp"

#include <cmath>

namespace farmgate {

namespace {

void check_share(double s, const char* which) {
    if (!(s > 0.0) || s > 1.0)
        throw ValidationError(Errc::zero_share,
                              std::string(which) + " share must lie in (0,1]");
}

}  // namespace

double allen_own(double alpha_ii, double share_i) {
    check_share(share_i, "own");
    return (alpha_ii + share_i * share_i - share_i) / (share_i * share_i);
}

double allen_cross(double alpha_ij, double share_i, double share_j) {
    check_share(share_i, "first");
    check_share(share_j, "second");
    return (alpha_ij + share_i * share_j) / (share_i * share_j);
}

double price_elasticity(double sigma_ij, double share_j) {
    check_share(share_j, "price");
    return sigma_ij * share_j;
}

ElasticityReport full_report(const TranslogCoefficients& coeffs,
                             const ShareVector& evaluation_shares,
                             double output_level, std::span<const double> w) {
    const std::size_t n = coeffs.input_count();
    if (evaluation_shares.size() != n)
        throw ValidationError(Errc::bad_config,
                              "evaluation shares do not match the input list");
    if (w.size() != n)
        throw ValidationError(Errc::bad_config,
                              "price vector does not match the input list");
    for (double wi : w)
        if (!(wi > 0.0))
            throw ValidationError(Errc::non_positive_price,
                                  "input prices must be positive");
    if (!(output_level > 0.0))
        throw ValidationError(Errc::non_positive_output,
                              "output level must be positive");

    ElasticityReport report{coeffs.inputs(),
                            Eigen::MatrixXd(static_cast<Eigen::Index>(n),
                                            static_cast<Eigen::Index>(n)),
                            Eigen::MatrixXd(static_cast<Eigen::Index>(n),
                                            static_cast<Eigen::Index>(n)),
                            std::vector<double>(n),
                            evaluation_shares,
                            true};

    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) {
            const double sigma =
                (i == j)
                    ? allen_own(coeffs.alpha_ij(i, i), evaluation_shares[i])
                    : allen_cross(coeffs.alpha_ij(i, j), evaluation_shares[i],
                                  evaluation_shares[j]);
            report.allen(static_cast<Eigen::Index>(i),
                         static_cast<Eigen::Index>(j)) = sigma;
            report.allen(static_cast<Eigen::Index>(j),
                         static_cast<Eigen::Index>(i)) = sigma;
        }

    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            report.price(static_cast<Eigen::Index>(i),
                         static_cast<Eigen::Index>(j)) =
                price_elasticity(report.allen(static_cast<Eigen::Index>(i),
                                              static_cast<Eigen::Index>(j)),
                                 evaluation_shares[j]);

    // d ln C / d ln y plus the share shift a_iy / S_i, from the derived
    // demand x_i = S_i C / w_i.
    const double ly = std::log(output_level);
    double dlnc_dlny = coeffs.alpha_y() + coeffs.alpha_yy() * ly;
    for (std::size_t j = 0; j < n; ++j)
        dlnc_dlny += coeffs.alpha_iy(j) * std::log(w[j]);
    for (std::size_t i = 0; i < n; ++i)
        report.output_elasticity[i] =
            dlnc_dlny + coeffs.alpha_iy(i) / evaluation_shares[i];

    for (std::size_t i = 0; i < n; ++i)
        if (report.price(static_cast<Eigen::Index>(i),
                         static_cast<Eigen::Index>(i)) >= 0.0)
            report.own_price_all_negative = false;

    return report;
}

}  // namespace farmgate
