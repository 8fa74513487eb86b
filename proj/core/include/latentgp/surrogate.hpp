#pragma once

#include <cstdint>
#include <vector>

#include "latentgp/ae_training.hpp"
#include "latentgp/autoencoder.hpp"
#include "latentgp/gp_bundle.hpp"

namespace latentgp {

// Trained two-stage surrogate: GPs map a load input to a latent
// Gaussian per component; Monte Carlo samples of that distribution
// pushed through the decoder give a per-dof predictive mean and
// standard deviation.
struct SurrogateModel {
    AutoencoderModel autoencoder;
    LatentGpBundle bundle;
    int sample_count = 300;
    std::uint64_t mc_seed = 0;
};

struct PredictionField {
    Eigen::VectorXd mean;  // per dof, raw units
    Eigen::VectorXd std;   // per dof, (S-1)-normalized
    Eigen::VectorXd latent_means;
    Eigen::VectorXd latent_vars;
};

// Decodes `sample_count` draws of N(latent_means, diag(latent_vars))
// and reduces them to a per-dof mean and standard deviation. Draws are
// keyed by (mc_seed, case_index, draw), so a given case is reproducible
// regardless of evaluation order. sample_count == 1 reports zero std.
PredictionField mc_decode(const AutoencoderModel& decoder,
                          const Eigen::VectorXd& latent_means,
                          const Eigen::VectorXd& latent_vars, int sample_count,
                          std::uint64_t mc_seed, std::uint64_t case_index);

// Full surrogate inference for one load input.
PredictionField predict_full(const SurrogateModel& model, const Eigen::VectorXd& load_input,
                             std::uint64_t case_index = 0);

// Autoencoder round trip of a raw field; the reconstruction-only
// baseline in error decompositions.
Eigen::VectorXd reconstruct(const SurrogateModel& model, const Eigen::VectorXd& u);

struct PipelineConfig {
    AutoencoderSpec ae_spec;
    TrainConfig ae_train;
    GpFitOptions gp;
    int sample_count = 300;
    std::uint64_t mc_seed = 0;
};

struct PipelineReport {
    std::vector<EpochStats> ae_history;
    double ae_final_mse = 0.0;
    double ae_reconstruction_rel_l2 = 0.0;
    std::vector<GpHyperparams> gp_hyperparams;
    std::vector<double> gp_lml;
    std::vector<char> gp_degenerate;
};

// Trains the autoencoder, encodes the training set, and fits the GP
// bundle. Errors from a stage propagate with the stage name prefixed.
SurrogateModel train_pipeline(const Dataset& train, const PipelineConfig& config,
                              PipelineReport* report = nullptr, int threads = 1);

}  // namespace latentgp
