#include "latentgp/metrics.hpp"

#include <cmath>

#include "latentgp/errors.hpp"
#include "latentgp/parallel.hpp"
#include "latentgp/text.hpp"

namespace latentgp {

ErrorReport error_decompose(const Eigen::VectorXd& prediction, const Eigen::VectorXd& truth,
                            const Eigen::VectorXd& round_trip) {
    if (prediction.size() != truth.size() || round_trip.size() != truth.size())
        throw ShapeError("error decomposition requires equal-length fields");
    ErrorReport r;
    r.framework = (prediction - truth).cwiseAbs();
    r.reconstruction = (round_trip - truth).cwiseAbs();
    r.gp_component = (prediction - round_trip).cwiseAbs();
    return r;
}

LatentHealth classify_latent_health(const Eigen::VectorXd& latent_means,
                                    const Eigen::VectorXd& latent_vars,
                                    const Eigen::VectorXd& latent_truth) {
    const Eigen::Index n = latent_means.size();
    if (latent_vars.size() != n || latent_truth.size() != n)
        throw ShapeError("latent health inputs must share one length");
    LatentHealth h;
    h.healthy.resize(static_cast<std::size_t>(n));
    h.correct = true;
    for (Eigen::Index l = 0; l < n; ++l) {
        if (latent_vars[l] < 0.0)
            throw ShapeError("negative latent variance " + format_double(latent_vars[l]) +
                             " at component " + format_int(l));
        double band = 2.0 * std::sqrt(latent_vars[l]);
        bool ok = std::abs(latent_truth[l] - latent_means[l]) <= band;
        h.healthy[static_cast<std::size_t>(l)] = ok ? 1 : 0;
        h.correct = h.correct && ok;
    }
    return h;
}

EvaluationResult evaluate_testset(const SurrogateModel& model, const Dataset& test,
                                  int threads) {
    const int m = test.n();
    if (m < 1)
        throw ShapeError("test dataset is empty");
    const int field_dim = test.field_dim();
    const int latent_dim = model.autoencoder.spec().latent_dim;
    if (field_dim != model.autoencoder.spec().input_dim)
        throw ShapeError("test fields have dimension " + format_int(field_dim) +
                         ", model expects " + format_int(model.autoencoder.spec().input_dim));

    EvaluationResult r;
    r.predictions_mean.resize(m, field_dim);
    r.predictions_std.resize(m, field_dim);
    r.latent_means.resize(m, latent_dim);
    r.latent_vars.resize(m, latent_dim);
    r.latent_truth.resize(m, latent_dim);
    r.error_framework.resize(m, field_dim);
    r.error_reconstruction.resize(m, field_dim);
    r.error_gp.resize(m, field_dim);
    r.health.resize(static_cast<std::size_t>(m));
    r.metrics.per_case_mean_error.resize(m);

    parallel_for(static_cast<std::size_t>(m), threads, [&](std::size_t i) {
        const auto row = static_cast<Eigen::Index>(i);
        Eigen::VectorXd truth = test.displacements.row(row).transpose();
        PredictionField pred =
            predict_full(model, test.forces.row(row).transpose(), i);
        Eigen::VectorXd round_trip = reconstruct(model, truth);
        ErrorReport err = error_decompose(pred.mean, truth, round_trip);
        Eigen::VectorXd z_truth = model.autoencoder.encode(truth);

        r.predictions_mean.row(row) = pred.mean.transpose();
        r.predictions_std.row(row) = pred.std.transpose();
        r.latent_means.row(row) = pred.latent_means.transpose();
        r.latent_vars.row(row) = pred.latent_vars.transpose();
        r.latent_truth.row(row) = z_truth.transpose();
        r.error_framework.row(row) = err.framework.transpose();
        r.error_reconstruction.row(row) = err.reconstruction.transpose();
        r.error_gp.row(row) = err.gp_component.transpose();
        r.health[i] = classify_latent_health(pred.latent_means, pred.latent_vars, z_truth);
        r.metrics.per_case_mean_error[row] = err.framework.mean();
    });

    r.metrics.mean_error = r.metrics.per_case_mean_error.mean();
    if (m > 1) {
        double ss = (r.metrics.per_case_mean_error.array() - r.metrics.mean_error)
                        .matrix()
                        .squaredNorm();
        r.metrics.error_std = std::sqrt(ss / (m - 1));
    }
    r.metrics.max_error = r.error_framework.maxCoeff();

    if (field_dim % 2 != 0)
        throw ShapeError("displacement fields must interleave (ux, uy) pairs");
    double max_nodal = 0.0;
    for (Eigen::Index i = 0; i < test.displacements.rows(); ++i)
        for (Eigen::Index n = 0; n < field_dim / 2; ++n) {
            double ux = test.displacements(i, 2 * n);
            double uy = test.displacements(i, 2 * n + 1);
            max_nodal = std::max(max_nodal, std::hypot(ux, uy));
        }
    r.metrics.max_nodal_displacement = max_nodal;

    long healthy_count = 0;
    long correct_count = 0;
    for (const LatentHealth& h : r.health) {
        for (char flag : h.healthy)
            healthy_count += flag;
        correct_count += h.correct ? 1 : 0;
    }
    r.healthy_percent =
        100.0 * static_cast<double>(healthy_count) / (static_cast<double>(m) * latent_dim);
    r.correct_percent = 100.0 * static_cast<double>(correct_count) / static_cast<double>(m);
    return r;
}

}  // namespace latentgp
