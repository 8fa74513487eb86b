#include "latentgp/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "latentgp/errors.hpp"

namespace latentgp {
namespace {

constexpr double kSqrt5 = 2.2360679774997896964;
constexpr double kExpCutoff = 700.0;

}  // namespace

double Matern52Kernel::operator()(double r) const {
    double a = kSqrt5 * r / length_scale;
    if (a > kExpCutoff)
        return 0.0;
    return signal_variance * (1.0 + a + a * a / 3.0) * std::exp(-a);
}

double Matern52Kernel::d_log_length_scale(double r) const {
    double a = kSqrt5 * r / length_scale;
    if (a > kExpCutoff)
        return 0.0;
    return signal_variance * (a * a / 3.0) * (1.0 + a) * std::exp(-a);
}

Eigen::MatrixXd covariance_matrix(const Eigen::MatrixXd& inputs, const Matern52Kernel& kernel,
                                  double diagonal_shift) {
    const Eigen::Index n = inputs.rows();
    Eigen::MatrixXd k(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        k(i, i) = kernel.signal_variance + diagonal_shift;
        for (Eigen::Index j = i + 1; j < n; ++j) {
            double r = (inputs.row(i) - inputs.row(j)).norm();
            double v = kernel(r);
            k(i, j) = v;
            k(j, i) = v;
        }
    }
    return k;
}

Eigen::VectorXd cross_covariance(const Eigen::MatrixXd& inputs,
                                 const Eigen::RowVectorXd& query,
                                 const Matern52Kernel& kernel) {
    if (query.size() != inputs.cols())
        throw ShapeError("query dimension does not match training inputs");
    const Eigen::Index n = inputs.rows();
    Eigen::VectorXd k(n);
    for (Eigen::Index i = 0; i < n; ++i)
        k(i) = kernel((inputs.row(i) - query).norm());
    return k;
}

double median_pairwise_distance(const Eigen::MatrixXd& inputs) {
    const Eigen::Index n = inputs.rows();
    if (n < 2)
        return 1.0;
    std::vector<double> dists;
    dists.reserve(static_cast<std::size_t>(n) * (n - 1) / 2);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = i + 1; j < n; ++j)
            dists.push_back((inputs.row(i) - inputs.row(j)).norm());
    auto mid = dists.begin() + static_cast<std::ptrdiff_t>(dists.size() / 2);
    std::nth_element(dists.begin(), mid, dists.end());
    double med = *mid;
    return med > 0.0 ? med : 1.0;
}

}  // namespace latentgp
