#pragma once

#include <Eigen/Dense>

namespace latentgp {

// Matern covariance with smoothness 5/2:
//   k(r) = sv * (1 + a + a^2/3) * exp(-a),  a = sqrt(5) r / ls.
// sv is the signal variance (kernel value at r = 0), ls the length
// scale. Evaluations underflow to exactly 0 once a > 700 so that
// extreme length-scale trials during fitting cannot produce NaN.
struct Matern52Kernel {
    double signal_variance = 1.0;
    double length_scale = 1.0;

    double operator()(double r) const;

    // d k / d log(length_scale) at separation r.
    double d_log_length_scale(double r) const;
};

// Dense kernel matrix over row-wise inputs, plus `diagonal_shift` on
// the diagonal (noise variance and/or jitter).
Eigen::MatrixXd covariance_matrix(const Eigen::MatrixXd& inputs, const Matern52Kernel& kernel,
                                  double diagonal_shift = 0.0);

// Covariances between every training input and one query point.
Eigen::VectorXd cross_covariance(const Eigen::MatrixXd& inputs,
                                 const Eigen::RowVectorXd& query,
                                 const Matern52Kernel& kernel);

// Median over all pairwise distances; the default length-scale
// initialization. Returns 1.0 for degenerate input sets.
double median_pairwise_distance(const Eigen::MatrixXd& inputs);

}  // namespace latentgp
