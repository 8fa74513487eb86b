#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <utility>

#include "latentgp/kernel.hpp"

namespace latentgp {

struct GpHyperparams {
    double signal_variance = 1.0;
    double length_scale = 1.0;
    double noise_variance = 0.1;
};

// Affine target transform; targets are standardized (zero mean, unit
// population std) before hyperparameter fitting.
struct Standardizer {
    double mean = 0.0;
    double stddev = 1.0;

    double apply(double y) const { return (y - mean) / stddev; }
    double invert(double y) const { return mean + stddev * y; }
};

struct GpFitOptions {
    int restarts = 5;  // total optimization runs; run 0 starts unperturbed
    int max_iterations = 100;
    double gradient_tolerance = 1e-6;
    std::uint64_t seed = 0;
    double noise_floor = 1e-8;
    double initial_noise = 0.1;
};

// Log marginal likelihood of standardized targets and its gradient with
// respect to (log sv, log ls, log nv). The Cholesky factorization adds
// escalating jitter (1e-10 to 1e-6, decades) when it fails outright;
// 'jitter_used' reports the shift that succeeded. Throws
// OptimizationFailureError if no jitter level factorizes.
struct LmlResult {
    double value = 0.0;
    Eigen::Vector3d gradient = Eigen::Vector3d::Zero();
    double jitter_used = 0.0;
};

LmlResult gp_lml(const Eigen::MatrixXd& inputs, const Eigen::VectorXd& targets,
                 const GpHyperparams& hp);

// Scalar-output Gaussian-process regressor with the Matern-5/2 kernel.
// Hyperparameters are fitted by maximizing the log marginal likelihood
// with L-BFGS in log-parameter space, restarted from perturbed
// initializations. Constant targets produce a flagged degenerate model
// that predicts the constant with variance equal to the noise floor.
class GpModel {
public:
    // Empty placeholder; assign a fitted or restored model before use.
    GpModel() = default;

    static GpModel fit(const Eigen::MatrixXd& inputs, const Eigen::VectorXd& targets,
                       const GpFitOptions& options = {});

    // Rebuilds the predictor from stored state (deserialization).
    static GpModel from_state(Eigen::MatrixXd inputs, Eigen::VectorXd targets,
                              const GpHyperparams& hp, const Standardizer& st,
                              bool degenerate);

    // Predictive mean and variance of the latent function value at one
    // query, in raw target units. Variance is clamped at zero.
    std::pair<double, double> predict(const Eigen::RowVectorXd& query) const;

    const GpHyperparams& hyperparams() const { return hp_; }
    const Standardizer& standardizer() const { return st_; }
    double log_marginal_likelihood() const { return lml_; }
    double jitter() const { return jitter_; }
    bool degenerate() const { return degenerate_; }
    const Eigen::MatrixXd& train_inputs() const { return inputs_; }
    const Eigen::VectorXd& train_targets() const { return targets_; }

private:
    void build_predictor();

    Eigen::MatrixXd inputs_;   // N x D
    Eigen::VectorXd targets_;  // raw units
    GpHyperparams hp_;
    Standardizer st_;
    bool degenerate_ = false;
    double lml_ = 0.0;
    double jitter_ = 0.0;

    Eigen::MatrixXd chol_lower_;
    Eigen::VectorXd alpha_;  // K_y^-1 y_std
};

}  // namespace latentgp
