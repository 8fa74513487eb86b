#pragma once

#include <vector>

#include "latentgp/gp_model.hpp"
#include "latentgp/latent_dataset.hpp"

namespace latentgp {

// One independent GP per latent component, sharing the load inputs.
// Fitting failures carry the component index in their message.
class LatentGpBundle {
public:
    static LatentGpBundle fit(const LatentDataset& data, const GpFitOptions& options = {},
                              int threads = 1);
    static LatentGpBundle from_models(std::vector<GpModel> models);

    // Per-component predictive means and variances at one load input.
    void predict(const Eigen::RowVectorXd& query, Eigen::VectorXd& means,
                 Eigen::VectorXd& variances) const;

    int latent_dim() const { return static_cast<int>(models_.size()); }
    int input_dim() const;
    const GpModel& component(int l) const { return models_.at(static_cast<std::size_t>(l)); }

private:
    std::vector<GpModel> models_;
};

}  // namespace latentgp
