#pragma once

#include <vector>

#include "latentgp/surrogate.hpp"

namespace latentgp {

// Per-dof absolute error split. By the triangle inequality
// framework <= reconstruction + gp_component holds entry-wise.
struct ErrorReport {
    Eigen::VectorXd framework;       // |prediction - truth|
    Eigen::VectorXd reconstruction;  // |round trip - truth|
    Eigen::VectorXd gp_component;    // |prediction - round trip|
};

ErrorReport error_decompose(const Eigen::VectorXd& prediction, const Eigen::VectorXd& truth,
                            const Eigen::VectorXd& round_trip);

// A latent component is healthy when the encoded truth lies within two
// predictive standard deviations of the GP mean (inclusive); a case is
// correct when every component is healthy.
struct LatentHealth {
    std::vector<char> healthy;
    bool correct = false;
};

LatentHealth classify_latent_health(const Eigen::VectorXd& latent_means,
                                    const Eigen::VectorXd& latent_vars,
                                    const Eigen::VectorXd& latent_truth);

struct TestMetrics {
    Eigen::VectorXd per_case_mean_error;  // mean |e_f| over dofs, one entry per case
    double mean_error = 0.0;              // average of per-case means
    double error_std = 0.0;               // their sample std (M - 1)
    double max_error = 0.0;               // max |e_f| over all cases and dofs
    double max_nodal_displacement = 0.0;  // max Euclidean nodal |u| in the truth fields
};

struct EvaluationResult {
    TestMetrics metrics;
    double healthy_percent = 0.0;  // healthy flags over M * L
    double correct_percent = 0.0;  // fully healthy cases over M
    std::vector<LatentHealth> health;
    Eigen::MatrixXd predictions_mean;  // M x field_dim
    Eigen::MatrixXd predictions_std;
    Eigen::MatrixXd latent_means;  // M x L
    Eigen::MatrixXd latent_vars;
    Eigen::MatrixXd latent_truth;
    Eigen::MatrixXd error_framework;  // M x field_dim
    Eigen::MatrixXd error_reconstruction;
    Eigen::MatrixXd error_gp;
};

// Runs the surrogate on every test case (MC case index = row index)
// and aggregates field errors and latent health against the FEM truth.
EvaluationResult evaluate_testset(const SurrogateModel& model, const Dataset& test,
                                  int threads = 1);

}  // namespace latentgp
