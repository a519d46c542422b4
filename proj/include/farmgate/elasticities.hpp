#pragma once

#include <Eigen/Dense>
#include <span>
#include <string>
#include <vector>

#include "farmgate/translog.hpp"

namespace farmgate {

// Allen substitution matrix, price-elasticity matrix and output
// elasticities of input demand, evaluated at one share point.
struct ElasticityReport {
    std::vector<std::string> inputs;
    Eigen::MatrixXd allen;   // sigma_ij, symmetric
    Eigen::MatrixXd price;   // eta_ij = sigma_ij * S_j, rows sum to 0
    std::vector<double> output_elasticity;  // d ln x_i / d ln y
    ShareVector shares_used;
    bool own_price_all_negative = false;  // concavity screen, not enforced
};

// sigma_ii = (a_ii + S_i^2 - S_i) / S_i^2
double allen_own(double alpha_ii, double share_i);

// sigma_ij = (a_ij + S_i S_j) / (S_i S_j)
double allen_cross(double alpha_ij, double share_i, double share_j);

// eta_ij = sigma_ij * S_j
double price_elasticity(double sigma_ij, double share_j);

ElasticityReport full_report(const TranslogCoefficients& coeffs,
                             const ShareVector& evaluation_shares,
                             double output_level, std::span<const double> w);

}  // namespace farmgate
