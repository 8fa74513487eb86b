#pragma once

#include <Eigen/Dense>

#include "latentgp/load.hpp"

namespace latentgp {

// Load inputs paired with encoded latent fields, one sample per row.
struct LatentDataset {
    LoadKind kind = LoadKind::PointLoad;
    Eigen::MatrixXd forces;   // n x input_dim
    Eigen::MatrixXd latents;  // n x latent_dim

    int n() const { return static_cast<int>(forces.rows()); }
    int input_dim() const { return static_cast<int>(forces.cols()); }
    int latent_dim() const { return static_cast<int>(latents.cols()); }
};

}  // namespace latentgp
