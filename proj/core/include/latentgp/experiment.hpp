#pragma once

#include "latentgp/metrics.hpp"
#include "latentgp/solver.hpp"

namespace latentgp {

// Classification of a load by magnitude relative to the masked disc
// and the training range: inside the disc, inside the range, or beyond.
enum class ForceGroup { Masked, Supported, Extrapolated };

struct MissingRegionConfig {
    double mask_radius = 0.0;   // loads with |f| below this are removed
    double force_range = 0.0;   // sampling range of the source dataset
    PipelineConfig pipeline;
    double sweep_extension = 1.2;  // sweep covers +-extension * force_range
    int sweep_points = 61;
    int scatter_count = 200;
    std::uint64_t scatter_seed = 0;
    // Attachment distance for sweep and scatter point loads; negative
    // selects the loadable node farthest from the fixed boundary.
    double attach_distance = -1.0;
    int threads = 1;
};

struct SweepPoint {
    double force = 0.0;  // signed y-component, x-component zero
    ForceGroup group = ForceGroup::Supported;
    bool fem_ok = false;
    Eigen::VectorXd std_raw;           // per-latent predictive std
    Eigen::VectorXd std_standardized;  // same, in target-standardized units
    Eigen::VectorXd abs_err_raw;       // |gp mean - encoded truth|, when fem_ok
    Eigen::VectorXd abs_err_standardized;
};

struct ScatterPoint {
    double fx = 0.0;
    double fy = 0.0;
    ForceGroup group = ForceGroup::Supported;
    Eigen::VectorXd std_raw;
    Eigen::VectorXd std_standardized;
};

struct MissingRegionResult {
    int removed = 0;
    int kept = 0;
    double mask_radius = 0.0;
    double force_range = 0.0;
    SurrogateModel model;  // retrained on the masked dataset
    PipelineReport pipeline_report;
    std::vector<SweepPoint> sweep;
    std::vector<ScatterPoint> scatter;
    // Scatter-group means of the per-latent predictive std, rows in
    // (Masked, Supported, Extrapolated) order. NaN for empty groups.
    Eigen::MatrixXd group_mean_std_raw;           // 3 x L
    Eigen::MatrixXd group_mean_std_standardized;  // 3 x L
    Eigen::Vector3i group_counts;
};

// Removes every training sample whose load magnitude falls below
// mask_radius, retrains the surrogate on the remainder, and probes the
// predictive uncertainty along a 1D force sweep (with FEM ground truth
// for latent errors) and over a random 2D scatter. Radius 0 keeps the
// dataset unchanged.
MissingRegionResult missing_region_experiment(const Dataset& train, const Mesh2D& mesh,
                                              const MaterialParams& mat,
                                              const SolveSettings& solve,
                                              const MissingRegionConfig& config);

const char* force_group_name(ForceGroup group);

}  // namespace latentgp
