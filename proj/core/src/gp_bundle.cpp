#include "latentgp/gp_bundle.hpp"

#include "latentgp/errors.hpp"
#include "latentgp/parallel.hpp"
#include "latentgp/rng.hpp"
#include "latentgp/text.hpp"

namespace latentgp {

LatentGpBundle LatentGpBundle::fit(const LatentDataset& data, const GpFitOptions& options,
                                   int threads) {
    if (data.n() < 1)
        throw ShapeError("latent dataset is empty");
    if (data.latents.rows() != data.forces.rows())
        throw ShapeError("latent dataset rows disagree: " + format_int(data.forces.rows()) +
                         " inputs vs " + format_int(data.latents.rows()) + " latents");

    const int latent_dim = data.latent_dim();
    LatentGpBundle bundle;
    bundle.models_.resize(static_cast<std::size_t>(latent_dim));

    parallel_for(static_cast<std::size_t>(latent_dim), threads, [&](std::size_t l) {
        GpFitOptions local = options;
        local.seed = derive_seed(options.seed, kTagGpRestart, l);
        try {
            bundle.models_[l] = GpModel::fit(data.forces, data.latents.col(
                                                 static_cast<Eigen::Index>(l)),
                                             local);
        } catch (Error& e) {
            e.add_context("latent component " + format_int(static_cast<long long>(l)));
            throw;
        }
    });
    return bundle;
}

LatentGpBundle LatentGpBundle::from_models(std::vector<GpModel> models) {
    if (models.empty())
        throw ShapeError("gp bundle needs at least one component");
    LatentGpBundle bundle;
    bundle.models_ = std::move(models);
    return bundle;
}

int LatentGpBundle::input_dim() const {
    return models_.empty() ? 0 : static_cast<int>(models_.front().train_inputs().cols());
}

void LatentGpBundle::predict(const Eigen::RowVectorXd& query, Eigen::VectorXd& means,
                             Eigen::VectorXd& variances) const {
    const auto latent_dim = static_cast<Eigen::Index>(models_.size());
    means.resize(latent_dim);
    variances.resize(latent_dim);
    for (Eigen::Index l = 0; l < latent_dim; ++l) {
        auto [m, v] = models_[static_cast<std::size_t>(l)].predict(query);
        means[l] = m;
        variances[l] = v;
    }
}

}  // namespace latentgp
