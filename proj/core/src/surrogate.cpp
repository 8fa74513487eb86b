#include "latentgp/surrogate.hpp"

#include <cmath>

#include "latentgp/errors.hpp"
#include "latentgp/rng.hpp"
#include "latentgp/text.hpp"

namespace latentgp {

PredictionField mc_decode(const AutoencoderModel& decoder,
                          const Eigen::VectorXd& latent_means,
                          const Eigen::VectorXd& latent_vars, int sample_count,
                          std::uint64_t mc_seed, std::uint64_t case_index) {
    const Eigen::Index latent_dim = latent_means.size();
    if (latent_vars.size() != latent_dim)
        throw ShapeError("latent mean and variance lengths differ");
    if (latent_dim != decoder.spec().latent_dim)
        throw ShapeError("latent vector has length " + format_int(latent_dim) +
                         ", decoder expects " + format_int(decoder.spec().latent_dim));
    if (sample_count < 1)
        throw ConfigError("sample_count must be >= 1");

    Eigen::VectorXd latent_std(latent_dim);
    for (Eigen::Index l = 0; l < latent_dim; ++l)
        latent_std[l] = std::sqrt(std::max(0.0, latent_vars[l]));

    Eigen::MatrixXd draws(sample_count, latent_dim);
    for (int s = 0; s < sample_count; ++s) {
        KeyedStream rng{mc_seed, kTagMonteCarlo, case_index, static_cast<std::uint64_t>(s)};
        for (Eigen::Index l = 0; l < latent_dim; ++l)
            draws(s, l) = latent_means[l] + latent_std[l] * rng.normal();
    }

    Eigen::MatrixXd fields = decoder.decode_batch(draws);  // S x field_dim

    PredictionField out;
    out.latent_means = latent_means;
    out.latent_vars = latent_vars;
    out.mean = fields.colwise().mean().transpose();
    if (sample_count > 1) {
        Eigen::MatrixXd centered = fields.rowwise() - out.mean.transpose();
        out.std = (centered.colwise().squaredNorm() / (sample_count - 1))
                      .cwiseSqrt()
                      .transpose();
    } else {
        out.std = Eigen::VectorXd::Zero(fields.cols());
    }
    return out;
}

PredictionField predict_full(const SurrogateModel& model, const Eigen::VectorXd& load_input,
                             std::uint64_t case_index) {
    Eigen::VectorXd means;
    Eigen::VectorXd vars;
    model.bundle.predict(load_input.transpose(), means, vars);
    return mc_decode(model.autoencoder, means, vars, model.sample_count, model.mc_seed,
                     case_index);
}

Eigen::VectorXd reconstruct(const SurrogateModel& model, const Eigen::VectorXd& u) {
    return model.autoencoder.decode(model.autoencoder.encode(u));
}

SurrogateModel train_pipeline(const Dataset& train, const PipelineConfig& config,
                              PipelineReport* report, int threads) {
    if (train.n() < 1)
        throw ShapeError("training dataset is empty");

    AutoencoderSpec spec = config.ae_spec;
    if (spec.input_dim == 0)
        spec.input_dim = train.field_dim();  // infer from the data
    if (spec.input_dim != train.field_dim())
        throw ShapeError("autoencoder input_dim " + format_int(spec.input_dim) +
                         " does not match field dimension " + format_int(train.field_dim()));

    TrainResult ae;
    try {
        ae = train_autoencoder(train.displacements, spec, config.ae_train);
    } catch (Error& e) {
        e.add_context("autoencoder stage");
        throw;
    }

    LatentDataset latents = encode_dataset(ae.model, train);

    LatentGpBundle bundle;
    try {
        bundle = LatentGpBundle::fit(latents, config.gp, threads);
    } catch (Error& e) {
        e.add_context("gp stage");
        throw;
    }

    if (report) {
        report->ae_history = std::move(ae.history);
        report->ae_final_mse = ae.final_mse;
        report->ae_reconstruction_rel_l2 = ae.reconstruction_rel_l2;
        report->gp_hyperparams.clear();
        report->gp_lml.clear();
        report->gp_degenerate.clear();
        for (int l = 0; l < bundle.latent_dim(); ++l) {
            const GpModel& gp = bundle.component(l);
            report->gp_hyperparams.push_back(gp.hyperparams());
            report->gp_lml.push_back(gp.log_marginal_likelihood());
            report->gp_degenerate.push_back(gp.degenerate() ? 1 : 0);
        }
    }

    return SurrogateModel{std::move(ae.model), std::move(bundle), config.sample_count,
                          config.mc_seed};
}

}  // namespace latentgp
