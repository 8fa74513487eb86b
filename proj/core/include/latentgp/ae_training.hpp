#pragma once

#include <cstdint>
#include <vector>

#include "latentgp/autoencoder.hpp"
#include "latentgp/fem_dataset.hpp"
#include "latentgp/latent_dataset.hpp"

namespace latentgp {

struct TrainConfig {
    int epochs = 2000;
    int batch_size = 16;
    double lr_start = 1e-4;
    double lr_end = 1e-6;
    double adam_beta1 = 0.9;
    double adam_beta2 = 0.999;
    double adam_epsilon = 1e-8;
    std::uint64_t seed = 0;

    void validate() const;  // throws ConfigError
};

// Adam with bias correction. Step count is internal state; lr varies
// per call to support schedules.
class AdamOptimizer {
public:
    AdamOptimizer(Eigen::Index dim, double beta1 = 0.9, double beta2 = 0.999,
                  double epsilon = 1e-8);

    void step(Eigen::VectorXd& params, const Eigen::VectorXd& grad, double lr);
    int steps_taken() const { return t_; }

private:
    Eigen::VectorXd m_;
    Eigen::VectorXd v_;
    double beta1_;
    double beta2_;
    double epsilon_;
    int t_ = 0;
};

// Linear schedule over 1-based step t of T total: exactly lr_start at
// t = 1 and lr_end at t = T (lr_start when T == 1).
double linear_lr(int t, int total_steps, double lr_start, double lr_end);

struct EpochStats {
    int epoch = 0;
    double mse = 0.0;  // sample-weighted mean of batch losses
    double lr = 0.0;   // last step's learning rate
};

struct TrainResult {
    AutoencoderModel model;
    std::vector<EpochStats> history;
    double final_mse = 0.0;              // full-set loss of the final model
    double reconstruction_rel_l2 = 0.0;  // |recon - u|_F / |u|_F, raw units
};

// Minibatch Adam training with a fresh shuffle every epoch. Normalizer
// is fitted from `displacements` (one sample per row) before training.
// A non-finite batch loss raises TrainingDivergenceError.
TrainResult train_autoencoder(const Eigen::MatrixXd& displacements,
                              const AutoencoderSpec& spec, const TrainConfig& config);

// Encodes every dataset sample, pairing latents with the load inputs.
LatentDataset encode_dataset(const AutoencoderModel& model, const Dataset& data);

}  // namespace latentgp
