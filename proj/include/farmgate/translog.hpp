#pragma once

#include <Eigen/Dense>
#include <span>
#include <string>
#include <vector>

#include "farmgate/data_model.hpp"

namespace farmgate {

// Fitted parameter set of the translog cost function
//   ln C = a0 + sum_i a_i ln w_i + a_y ln y
//        + 1/2 sum_ij a_ij ln w_i ln w_j + 1/2 a_yy (ln y)^2
//        + sum_i a_iy ln w_i ln y
// with symmetry (a_ij == a_ji, shared storage) and degree-one price
// homogeneity (sum_i a_i == 1, row sums of a_ij == 0, sum_i a_iy == 0)
// embedded at construction. `from_free` completes a free-parameter set so
// the constraints hold by construction; `from_checked` verifies a full set.
class TranslogCoefficients {
public:
    // Free parameters relative to the numeraire input k: everything except
    // a_k, the a_ik column/row and a_ky, which are implied by homogeneity.
    struct Free {
        double alpha0 = 0.0;
        std::vector<double> alpha_i;            // size n-1, inputs != numeraire
        double alpha_y = 0.0;
        std::vector<double> alpha_ij_upper;     // upper triangle (incl diag) of
                                                // the (n-1)x(n-1) non-numeraire
                                                // block, row-major
        double alpha_yy = 0.0;
        std::vector<double> alpha_iy;           // size n-1
    };

    static TranslogCoefficients from_free(std::vector<std::string> inputs,
                                          std::size_t numeraire_index,
                                          const Free& free);

    static TranslogCoefficients from_checked(std::vector<std::string> inputs,
                                             std::string numeraire,
                                             double alpha0,
                                             std::vector<double> alpha_i,
                                             double alpha_y,
                                             Eigen::MatrixXd alpha_ij,
                                             double alpha_yy,
                                             std::vector<double> alpha_iy);

    const std::vector<std::string>& inputs() const { return inputs_; }
    std::size_t input_count() const { return inputs_.size(); }
    const std::string& numeraire() const { return inputs_[numeraire_]; }
    std::size_t numeraire_index() const { return numeraire_; }

    double alpha0() const { return alpha0_; }
    double alpha_i(std::size_t i) const { return alpha_i_[i]; }
    double alpha_y() const { return alpha_y_; }
    double alpha_ij(std::size_t i, std::size_t j) const { return alpha_ij_(i, j); }
    double alpha_yy() const { return alpha_yy_; }
    double alpha_iy(std::size_t i) const { return alpha_iy_[i]; }
    const Eigen::MatrixXd& alpha_ij_matrix() const { return alpha_ij_; }
    const std::vector<double>& alpha_i_vector() const { return alpha_i_; }
    const std::vector<double>& alpha_iy_vector() const { return alpha_iy_; }

    Free to_free() const;

private:
    TranslogCoefficients() = default;

    std::vector<std::string> inputs_;
    std::size_t numeraire_ = 0;
    double alpha0_ = 0.0;
    std::vector<double> alpha_i_;
    double alpha_y_ = 0.0;
    Eigen::MatrixXd alpha_ij_;
    double alpha_yy_ = 0.0;
    std::vector<double> alpha_iy_;
};

enum class Estimator { IteratedFeasibleGls, StackedRestrictedLs };

struct EstimationOptions {
    int max_iterations = 100;
    double convergence_tol = 1e-8;
    std::string numeraire;               // empty selects the last input
    std::string dropped_share_equation;  // empty selects the numeraire
    Estimator estimator = Estimator::IteratedFeasibleGls;
};

struct FitReport {
    TranslogCoefficients coefficients;
    int iterations_used = 0;
    bool converged = false;
    std::vector<double> residual_variance_per_equation;
    int sample_size = 0;
    std::vector<std::string> equation_labels;
    std::string dropped_share_equation;
};

double predict_log_cost(const TranslogCoefficients& coeffs,
                        std::span<const double> w, double y);

// Shephard shares S_i = a_i + a_iy ln y + sum_j a_ij ln w_j. The result sums
// to 1 by the homogeneity constraints but individual entries may leave
// [0,1] at extreme prices; query all_in_unit_interval() to detect that.
ShareVector predicted_shares(const TranslogCoefficients& coeffs,
                             std::span<const double> w, double y);

// Divides total cost and every input price by the numeraire's price,
// observation by observation.
CostDataset normalize_by_numeraire(const CostDataset& data,
                                   const std::string& numeraire);

// Joint estimation of the normalized cost equation and n-1 share equations
// with symmetry and homogeneity eliminated from the parameter space.
FitReport fit(const CostDataset& data, const EstimationOptions& options);

}  // namespace farmgate
