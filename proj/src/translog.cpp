#include "farmgate/translog.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace farmgate {

namespace {

constexpr double kConstraintTol = 1e-10;
constexpr double kConditionLimit = 1e12;

std::size_t find_input(const std::vector<std::string>& inputs,
                       const std::string& name, Errc code) {
    for (std::size_t i = 0; i < inputs.size(); ++i)
        if (inputs[i] == name) return i;
    throw ValidationError(code, "input '" + name + "' is not modeled");
}

// Row-major upper-triangle index over an m x m block, a <= b.
std::size_t tri_index(std::size_t a, std::size_t b, std::size_t m) {
    return a * m - a * (a - 1) / 2 + (b - a);
}

// Least squares via column-pivoted QR; declares the system singular when
// the diagonal-of-R condition estimate exceeds 1e12.
Eigen::VectorXd solve_least_squares(const Eigen::MatrixXd& x,
                                    const Eigen::VectorXd& y) {
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(x);
    const Eigen::MatrixXd& r = qr.matrixR();
    const std::size_t p = static_cast<std::size_t>(x.cols());
    double dmax = 0.0;
    double dmin = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < p; ++i) {
        const double d = std::fabs(r(static_cast<Eigen::Index>(i),
                                     static_cast<Eigen::Index>(i)));
        dmax = std::max(dmax, d);
        dmin = std::min(dmin, d);
    }
    if (dmin == 0.0 || dmax / dmin > kConditionLimit)
        throw ComputationError(Errc::singular_system,
                               "regressors are collinear or near-collinear");
    return qr.solve(y);
}

}  // namespace

TranslogCoefficients TranslogCoefficients::from_free(
    std::vector<std::string> inputs, std::size_t numeraire_index,
    const Free& free) {
    const std::size_t n = inputs.size();
    if (n < 2 || numeraire_index >= n)
        throw ValidationError(Errc::numeraire_not_found,
                              "bad numeraire index for free coefficients");
    const std::size_t m = n - 1;
    if (free.alpha_i.size() != m || free.alpha_iy.size() != m ||
        free.alpha_ij_upper.size() != m * (m + 1) / 2)
        throw ValidationError(Errc::bad_config,
                              "free coefficient block sizes do not match");

    std::vector<std::size_t> nn;  // non-numeraire input indices, in order
    for (std::size_t i = 0; i < n; ++i)
        if (i != numeraire_index) nn.push_back(i);

    TranslogCoefficients c;
    c.inputs_ = std::move(inputs);
    c.numeraire_ = numeraire_index;
    c.alpha0_ = free.alpha0;
    c.alpha_y_ = free.alpha_y;
    c.alpha_yy_ = free.alpha_yy;

    c.alpha_i_.assign(n, 0.0);
    c.alpha_iy_.assign(n, 0.0);
    double sum_ai = 0.0, sum_aiy = 0.0;
    for (std::size_t a = 0; a < m; ++a) {
        c.alpha_i_[nn[a]] = free.alpha_i[a];
        c.alpha_iy_[nn[a]] = free.alpha_iy[a];
        sum_ai += free.alpha_i[a];
        sum_aiy += free.alpha_iy[a];
    }
    c.alpha_i_[numeraire_index] = 1.0 - sum_ai;
    c.alpha_iy_[numeraire_index] = -sum_aiy;

    c.alpha_ij_.setZero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    auto at = [&](std::size_t i, std::size_t j) -> double& {
        return c.alpha_ij_(static_cast<Eigen::Index>(i),
                           static_cast<Eigen::Index>(j));
    };
    for (std::size_t a = 0; a < m; ++a) {
        for (std::size_t b = a; b < m; ++b) {
            const double v = free.alpha_ij_upper[tri_index(a, b, m)];
            at(nn[a], nn[b]) = v;
            at(nn[b], nn[a]) = v;
        }
    }
    double block_total = 0.0;
    for (std::size_t a = 0; a < m; ++a) {
        double row = 0.0;
        for (std::size_t b = 0; b < m; ++b) row += at(nn[a], nn[b]);
        at(nn[a], numeraire_index) = -row;
        at(numeraire_index, nn[a]) = -row;
        block_total += row;
    }
    at(numeraire_index, numeraire_index) = block_total;
    return c;
}

TranslogCoefficients TranslogCoefficients::from_checked(
    std::vector<std::string> inputs, std::string numeraire, double alpha0,
    std::vector<double> alpha_i, double alpha_y, Eigen::MatrixXd alpha_ij,
    double alpha_yy, std::vector<double> alpha_iy) {
    const std::size_t n = inputs.size();
    const std::size_t k = find_input(inputs, numeraire, Errc::numeraire_not_found);
    if (alpha_i.size() != n || alpha_iy.size() != n ||
        alpha_ij.rows() != static_cast<Eigen::Index>(n) ||
        alpha_ij.cols() != static_cast<Eigen::Index>(n))
        throw ValidationError(Errc::bad_config,
                              "coefficient blocks do not match the input list");

    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            const double a = alpha_ij(static_cast<Eigen::Index>(i),
                                      static_cast<Eigen::Index>(j));
            const double b = alpha_ij(static_cast<Eigen::Index>(j),
                                      static_cast<Eigen::Index>(i));
            if (std::fabs(a - b) > kConstraintTol)
                throw ValidationError(Errc::bad_config,
                                      "alpha_ij is not symmetric at (" +
                                          inputs[i] + "," + inputs[j] + ")");
            // mirror so reads are bitwise identical
            alpha_ij(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = a;
        }

    double sum_ai = 0.0, sum_aiy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sum_ai += alpha_i[i];
        sum_aiy += alpha_iy[i];
        double row = 0.0;
        for (std::size_t j = 0; j < n; ++j)
            row += alpha_ij(static_cast<Eigen::Index>(i),
                            static_cast<Eigen::Index>(j));
        if (std::fabs(row) > kConstraintTol)
            throw ValidationError(Errc::bad_config,
                                  "alpha_ij row for '" + inputs[i] +
                                      "' does not sum to 0");
    }
    if (std::fabs(sum_ai - 1.0) > kConstraintTol)
        throw ValidationError(Errc::bad_config, "alpha_i does not sum to 1");
    if (std::fabs(sum_aiy) > kConstraintTol)
        throw ValidationError(Errc::bad_config, "alpha_iy does not sum to 0");

    TranslogCoefficients c;
    c.inputs_ = std::move(inputs);
    c.numeraire_ = k;
    c.alpha0_ = alpha0;
    c.alpha_i_ = std::move(alpha_i);
    c.alpha_y_ = alpha_y;
    c.alpha_ij_ = std::move(alpha_ij);
    c.alpha_yy_ = alpha_yy;
    c.alpha_iy_ = std::move(alpha_iy);
    return c;
}

TranslogCoefficients::Free TranslogCoefficients::to_free() const {
    const std::size_t n = inputs_.size();
    const std::size_t m = n - 1;
    std::vector<std::size_t> nn;
    for (std::size_t i = 0; i < n; ++i)
        if (i != numeraire_) nn.push_back(i);

    Free f;
    f.alpha0 = alpha0_;
    f.alpha_y = alpha_y_;
    f.alpha_yy = alpha_yy_;
    for (std::size_t a = 0; a < m; ++a) {
        f.alpha_i.push_back(alpha_i_[nn[a]]);
        f.alpha_iy.push_back(alpha_iy_[nn[a]]);
    }
    f.alpha_ij_upper.resize(m * (m + 1) / 2);
    for (std::size_t a = 0; a < m; ++a)
        for (std::size_t b = a; b < m; ++b)
            f.alpha_ij_upper[tri_index(a, b, m)] =
                alpha_ij_(static_cast<Eigen::Index>(nn[a]),
                          static_cast<Eigen::Index>(nn[b]));
    return f;
}

namespace {

void check_point(const TranslogCoefficients& coeffs, std::span<const double> w,
                 double y) {
    if (w.size() != coeffs.input_count())
        throw ValidationError(Errc::bad_config,
                              "price vector size does not match inputs");
    for (double wi : w)
        if (!(wi > 0.0))
            throw ValidationError(Errc::non_positive_price,
                                  "input prices must be positive");
    if (!(y > 0.0))
        throw ValidationError(Errc::non_positive_output,
                              "output level must be positive");
}

}  // namespace

double predict_log_cost(const TranslogCoefficients& coeffs,
                        std::span<const double> w, double y) {
    check_point(coeffs, w, y);
    const std::size_t n = coeffs.input_count();
    std::vector<double> lw(n);
    for (std::size_t i = 0; i < n; ++i) lw[i] = std::log(w[i]);
    const double ly = std::log(y);

    double acc = coeffs.alpha0() + coeffs.alpha_y() * ly +
                 0.5 * coeffs.alpha_yy() * ly * ly;
    for (std::size_t i = 0; i < n; ++i) {
        acc += coeffs.alpha_i(i) * lw[i];
        acc += coeffs.alpha_iy(i) * lw[i] * ly;
        for (std::size_t j = 0; j < n; ++j)
            acc += 0.5 * coeffs.alpha_ij(i, j) * lw[i] * lw[j];
    }
    return acc;
}

ShareVector predicted_shares(const TranslogCoefficients& coeffs,
                             std::span<const double> w, double y) {
    check_point(coeffs, w, y);
    const std::size_t n = coeffs.input_count();
    std::vector<double> lw(n);
    for (std::size_t i = 0; i < n; ++i) lw[i] = std::log(w[i]);
    const double ly = std::log(y);

    std::vector<double> shares(n);
    for (std::size_t i = 0; i < n; ++i) {
        double s = coeffs.alpha_i(i) + coeffs.alpha_iy(i) * ly;
        for (std::size_t j = 0; j < n; ++j)
            s += coeffs.alpha_ij(i, j) * lw[j];
        shares[i] = s;
    }
    return ShareVector(coeffs.inputs(), std::move(shares));
}

CostDataset normalize_by_numeraire(const CostDataset& data,
                                   const std::string& numeraire) {
    const std::size_t k =
        find_input(data.inputs, numeraire, Errc::numeraire_not_found);
    CostDataset out;
    out.inputs = data.inputs;
    out.observations.reserve(data.observations.size());
    for (const CostObservation& obs : data.observations) {
        const double wk = obs.input_prices[k];
        CostObservation t = obs;
        t.total_cost = obs.total_cost / wk;
        for (double& w : t.input_prices) w /= wk;
        out.observations.push_back(std::move(t));
    }
    return out;
}

namespace {

struct DesignPoint {
    std::vector<double> rel_log_price;  // m entries, non-numeraire inputs
    double log_output = 0.0;
    double log_rel_cost = 0.0;
    std::vector<double> shares;  // all n observed shares
};

struct FreeLayout {
    std::size_t m = 0;
    std::size_t alpha0 = 0;
    std::size_t alpha_i0 = 1;
    std::size_t alpha_y = 0;
    std::size_t alpha_ij0 = 0;
    std::size_t alpha_yy = 0;
    std::size_t alpha_iy0 = 0;
    std::size_t total = 0;

    explicit FreeLayout(std::size_t m_in) : m(m_in) {
        alpha_y = 1 + m;
        alpha_ij0 = 2 + m;
        alpha_yy = alpha_ij0 + m * (m + 1) / 2;
        alpha_iy0 = alpha_yy + 1;
        total = alpha_iy0 + m;
    }
};

TranslogCoefficients::Free unpack(const Eigen::VectorXd& theta,
                                  const FreeLayout& lay) {
    TranslogCoefficients::Free f;
    f.alpha0 = theta(static_cast<Eigen::Index>(lay.alpha0));
    for (std::size_t a = 0; a < lay.m; ++a)
        f.alpha_i.push_back(theta(static_cast<Eigen::Index>(lay.alpha_i0 + a)));
    f.alpha_y = theta(static_cast<Eigen::Index>(lay.alpha_y));
    for (std::size_t t = 0; t < lay.m * (lay.m + 1) / 2; ++t)
        f.alpha_ij_upper.push_back(
            theta(static_cast<Eigen::Index>(lay.alpha_ij0 + t)));
    f.alpha_yy = theta(static_cast<Eigen::Index>(lay.alpha_yy));
    for (std::size_t a = 0; a < lay.m; ++a)
        f.alpha_iy.push_back(theta(static_cast<Eigen::Index>(lay.alpha_iy0 + a)));
    return f;
}

}  // namespace

FitReport fit(const CostDataset& data, const EstimationOptions& options) {
    const std::vector<std::string>& inputs = data.inputs;
    const std::size_t n = inputs.size();
    if (n < 2)
        throw ValidationError(Errc::bad_config, "need at least 2 modeled inputs");

    const std::string numeraire_name =
        options.numeraire.empty() ? inputs.back() : options.numeraire;
    const std::size_t k =
        find_input(inputs, numeraire_name, Errc::numeraire_not_found);
    const std::string dropped_name = options.dropped_share_equation.empty()
                                         ? numeraire_name
                                         : options.dropped_share_equation;
    const std::size_t dropped =
        find_input(inputs, dropped_name, Errc::bad_config);

    const std::size_t m = n - 1;
    const FreeLayout lay(m);
    const std::size_t N = data.observations.size();
    if (N < lay.total)
        throw ComputationError(
            Errc::insufficient_observations,
            std::to_string(N) + " observations for " + std::to_string(lay.total) +
                " free parameters");

    std::vector<std::size_t> nn;
    for (std::size_t i = 0; i < n; ++i)
        if (i != k) nn.push_back(i);

    const CostDataset norm = normalize_by_numeraire(data, numeraire_name);
    std::vector<DesignPoint> pts(N);
    for (std::size_t o = 0; o < N; ++o) {
        const CostObservation& obs = norm.observations[o];
        DesignPoint& pt = pts[o];
        pt.rel_log_price.resize(m);
        for (std::size_t a = 0; a < m; ++a)
            pt.rel_log_price[a] = std::log(obs.input_prices[nn[a]]);
        pt.log_output = std::log(obs.output_level);
        pt.log_rel_cost = std::log(obs.total_cost);
        pt.shares = obs.cost_shares.values();
    }

    // Retained equations: the cost equation, then every share equation
    // except the dropped one, in input order.
    std::vector<std::size_t> share_eqs;
    for (std::size_t i = 0; i < n; ++i)
        if (i != dropped) share_eqs.push_back(i);
    const std::size_t G = 1 + share_eqs.size();

    const auto p = static_cast<Eigen::Index>(lay.total);
    std::vector<Eigen::MatrixXd> X(G, Eigen::MatrixXd::Zero(
                                          static_cast<Eigen::Index>(N), p));
    std::vector<Eigen::VectorXd> Y(G,
                                   Eigen::VectorXd::Zero(static_cast<Eigen::Index>(N)));

    for (std::size_t o = 0; o < N; ++o) {
        const DesignPoint& pt = pts[o];
        const auto row = static_cast<Eigen::Index>(o);
        const double ly = pt.log_output;

        // cost equation
        {
            Eigen::MatrixXd& Xc = X[0];
            Xc(row, static_cast<Eigen::Index>(lay.alpha0)) = 1.0;
            for (std::size_t a = 0; a < m; ++a)
                Xc(row, static_cast<Eigen::Index>(lay.alpha_i0 + a)) =
                    pt.rel_log_price[a];
            Xc(row, static_cast<Eigen::Index>(lay.alpha_y)) = ly;
            for (std::size_t a = 0; a < m; ++a)
                for (std::size_t b = a; b < m; ++b) {
                    const double ra = pt.rel_log_price[a];
                    const double rb = pt.rel_log_price[b];
                    Xc(row, static_cast<Eigen::Index>(lay.alpha_ij0 +
                                                      tri_index(a, b, m))) =
                        (a == b) ? 0.5 * ra * ra : ra * rb;
                }
            Xc(row, static_cast<Eigen::Index>(lay.alpha_yy)) = 0.5 * ly * ly;
            for (std::size_t a = 0; a < m; ++a)
                Xc(row, static_cast<Eigen::Index>(lay.alpha_iy0 + a)) =
                    pt.rel_log_price[a] * ly;
            Y[0](row) = pt.log_rel_cost;
        }

        // share equations
        for (std::size_t g = 0; g < share_eqs.size(); ++g) {
            Eigen::MatrixXd& Xs = X[g + 1];
            const std::size_t s = share_eqs[g];
            if (s != k) {
                const auto a = static_cast<std::size_t>(
                    std::find(nn.begin(), nn.end(), s) - nn.begin());
                Xs(row, static_cast<Eigen::Index>(lay.alpha_i0 + a)) = 1.0;
                for (std::size_t b = 0; b < m; ++b) {
                    const std::size_t t =
                        tri_index(std::min(a, b), std::max(a, b), m);
                    Xs(row, static_cast<Eigen::Index>(lay.alpha_ij0 + t)) +=
                        pt.rel_log_price[b];
                }
                Xs(row, static_cast<Eigen::Index>(lay.alpha_iy0 + a)) = ly;
                Y[g + 1](row) = pt.shares[s];
            } else {
                // numeraire's share with its parameters eliminated:
                // S_k - 1 = -sum_a alpha_a - sum_a alpha_ay ln y
                //           - sum_a sum_b alpha_ab r_a
                for (std::size_t a = 0; a < m; ++a) {
                    Xs(row, static_cast<Eigen::Index>(lay.alpha_i0 + a)) = -1.0;
                    Xs(row, static_cast<Eigen::Index>(lay.alpha_iy0 + a)) = -ly;
                }
                for (std::size_t a = 0; a < m; ++a)
                    for (std::size_t b = a; b < m; ++b) {
                        const std::size_t t = tri_index(a, b, m);
                        const double v =
                            (a == b) ? pt.rel_log_price[a]
                                     : pt.rel_log_price[a] + pt.rel_log_price[b];
                        Xs(row, static_cast<Eigen::Index>(lay.alpha_ij0 + t)) -= v;
                    }
                Y[g + 1](row) = pt.shares[s] - 1.0;
            }
        }
    }

    const auto rows_all = static_cast<Eigen::Index>(N * G);
    Eigen::MatrixXd stacked_x(rows_all, p);
    Eigen::VectorXd stacked_y(rows_all);
    for (std::size_t g = 0; g < G; ++g) {
        stacked_x.middleRows(static_cast<Eigen::Index>(g * N),
                             static_cast<Eigen::Index>(N)) = X[g];
        stacked_y.segment(static_cast<Eigen::Index>(g * N),
                          static_cast<Eigen::Index>(N)) = Y[g];
    }

    Eigen::VectorXd theta = solve_least_squares(stacked_x, stacked_y);

    auto residual_matrix = [&](const Eigen::VectorXd& th) {
        Eigen::MatrixXd e(static_cast<Eigen::Index>(N),
                          static_cast<Eigen::Index>(G));
        for (std::size_t g = 0; g < G; ++g)
            e.col(static_cast<Eigen::Index>(g)) = Y[g] - X[g] * th;
        return e;
    };

    int iterations_used = 1;
    bool converged = true;

    if (options.estimator == Estimator::IteratedFeasibleGls) {
        converged = false;
        iterations_used = 0;
        for (int it = 1; it <= options.max_iterations; ++it) {
            iterations_used = it;
            const Eigen::MatrixXd e = residual_matrix(theta);
            Eigen::MatrixXd sigma =
                (e.transpose() * e) / static_cast<double>(N);

            Eigen::LLT<Eigen::MatrixXd> llt(sigma);
            if (llt.info() != Eigen::Success) {
                // degenerate residual covariance (e.g. a noiseless fit);
                // proportional weighting keeps the GLS step well defined
                const double jitter =
                    std::max(sigma.trace() / static_cast<double>(G), 0.0) *
                        1e-12 +
                    1e-300;
                sigma += jitter *
                         Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(G),
                                                   static_cast<Eigen::Index>(G));
                llt.compute(sigma);
                if (llt.info() != Eigen::Success)
                    throw ComputationError(Errc::singular_system,
                                           "residual covariance is not positive "
                                           "definite");
            }
            const Eigen::MatrixXd l = llt.matrixL();

            Eigen::MatrixXd gx(rows_all, p);
            Eigen::VectorXd gy(rows_all);
            Eigen::MatrixXd block(static_cast<Eigen::Index>(G), p);
            Eigen::VectorXd target(static_cast<Eigen::Index>(G));
            for (std::size_t o = 0; o < N; ++o) {
                const auto row = static_cast<Eigen::Index>(o);
                for (std::size_t g = 0; g < G; ++g) {
                    block.row(static_cast<Eigen::Index>(g)) = X[g].row(row);
                    target(static_cast<Eigen::Index>(g)) = Y[g](row);
                }
                block = l.triangularView<Eigen::Lower>().solve(block);
                target = l.triangularView<Eigen::Lower>().solve(target);
                gx.middleRows(static_cast<Eigen::Index>(o * G),
                              static_cast<Eigen::Index>(G)) = block;
                gy.segment(static_cast<Eigen::Index>(o * G),
                           static_cast<Eigen::Index>(G)) = target;
            }

            const Eigen::VectorXd next = solve_least_squares(gx, gy);
            double delta = 0.0;
            for (Eigen::Index i = 0; i < next.size(); ++i)
                delta = std::max(delta, std::fabs(next(i) - theta(i)) /
                                            std::max(1.0, std::fabs(theta(i))));
            theta = next;
            if (delta < options.convergence_tol) {
                converged = true;
                break;
            }
        }
    }

    const Eigen::MatrixXd e = residual_matrix(theta);
    FitReport report{TranslogCoefficients::from_free(inputs, k,
                                                     unpack(theta, lay)),
                     iterations_used,
                     converged,
                     {},
                     static_cast<int>(N),
                     {},
                     {}};
    report.equation_labels.push_back("cost");
    for (std::size_t s : share_eqs)
        report.equation_labels.push_back("share_" + inputs[s]);
    for (std::size_t g = 0; g < G; ++g)
        report.residual_variance_per_equation.push_back(
            e.col(static_cast<Eigen::Index>(g)).squaredNorm() /
            static_cast<double>(N));
    report.dropped_share_equation = inputs[dropped];
    return report;
}

}  // namespace farmgate
