#include "latentgp/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "latentgp/errors.hpp"
#include "latentgp/parallel.hpp"
#include "latentgp/rng.hpp"
#include "latentgp/text.hpp"

namespace latentgp {
namespace {

// Scatter and sweep cases draw from disjoint MC case-index ranges so
// their streams never collide.
constexpr std::uint64_t kScatterCaseOffset = 1u << 20;

double load_magnitude(const Eigen::RowVectorXd& force_row) {
    return std::hypot(force_row[0], force_row[1]);
}

ForceGroup classify(double magnitude, double mask_radius, double force_range) {
    if (magnitude < mask_radius)
        return ForceGroup::Masked;
    if (magnitude <= force_range)
        return ForceGroup::Supported;
    return ForceGroup::Extrapolated;
}

Eigen::VectorXd latent_stddevs(const LatentGpBundle& bundle) {
    Eigen::VectorXd s(bundle.latent_dim());
    for (int l = 0; l < bundle.latent_dim(); ++l)
        s[l] = bundle.component(l).standardizer().stddev;
    return s;
}

}  // namespace

const char* force_group_name(ForceGroup group) {
    switch (group) {
        case ForceGroup::Masked:
            return "masked";
        case ForceGroup::Supported:
            return "supported";
        default:
            return "extrapolated";
    }
}

MissingRegionResult missing_region_experiment(const Dataset& train, const Mesh2D& mesh,
                                              const MaterialParams& mat,
                                              const SolveSettings& solve,
                                              const MissingRegionConfig& config) {
    if (config.mask_radius < 0.0)
        throw ConfigError("mask_radius must be >= 0");
    if (!(config.force_range > 0.0))
        throw ConfigError("force_range must be positive");
    if (config.sweep_points < 2)
        throw ConfigError("sweep needs at least two points");
    if (config.scatter_count < 1)
        throw ConfigError("scatter needs at least one point");

    MissingRegionResult result;
    result.mask_radius = config.mask_radius;
    result.force_range = config.force_range;

    // Drop every sample inside the masked disc.
    std::vector<Eigen::Index> keep;
    for (Eigen::Index i = 0; i < train.forces.rows(); ++i)
        if (load_magnitude(train.forces.row(i)) >= config.mask_radius)
            keep.push_back(i);
    result.kept = static_cast<int>(keep.size());
    result.removed = train.n() - result.kept;
    if (keep.empty())
        throw ConfigError("mask radius " + format_double(config.mask_radius) +
                          " removed every training sample");

    Dataset masked;
    masked.kind = train.kind;
    masked.forces.resize(result.kept, train.forces.cols());
    masked.displacements.resize(result.kept, train.displacements.cols());
    for (std::size_t r = 0; r < keep.size(); ++r) {
        masked.forces.row(static_cast<Eigen::Index>(r)) = train.forces.row(keep[r]);
        masked.displacements.row(static_cast<Eigen::Index>(r)) =
            train.displacements.row(keep[r]);
    }

    result.model = train_pipeline(masked, config.pipeline, &result.pipeline_report,
                                  config.threads);
    const Eigen::VectorXd target_std = latent_stddevs(result.model.bundle);
    const int latent_dim = result.model.bundle.latent_dim();

    double attach = config.attach_distance;
    if (train.kind == LoadKind::PointLoad && attach < 0.0) {
        attach = *std::max_element(mesh.loadable_distance.begin(),
                                   mesh.loadable_distance.end());
    }

    auto make_input = [&](double fx, double fy) {
        if (train.kind == LoadKind::PointLoad) {
            Eigen::Vector3d v(fx, fy, attach);
            return Eigen::VectorXd(v);
        }
        return Eigen::VectorXd(Eigen::Vector2d(fx, fy));
    };

    // 1D sweep along the y-component with FEM truth where it converges.
    const double extent = config.sweep_extension * config.force_range;
    result.sweep.resize(static_cast<std::size_t>(config.sweep_points));
    parallel_for(static_cast<std::size_t>(config.sweep_points), config.threads,
                 [&](std::size_t i) {
                     double frac = static_cast<double>(i) /
                                   static_cast<double>(config.sweep_points - 1);
                     double fy = -extent + 2.0 * extent * frac;
                     SweepPoint& pt = result.sweep[i];
                     pt.force = fy;
                     pt.group = classify(std::abs(fy), config.mask_radius,
                                         config.force_range);

                     Eigen::VectorXd input = make_input(0.0, fy);
                     PredictionField pred = predict_full(result.model, input, i);
                     pt.std_raw = pred.latent_vars.cwiseMax(0.0).cwiseSqrt();
                     pt.std_standardized = pt.std_raw.cwiseQuotient(target_std);

                     LoadSpec load = train.kind == LoadKind::PointLoad
                                         ? LoadSpec::point(0.0, fy, attach)
                                         : LoadSpec::body(0.0, fy);
                     try {
                         Eigen::VectorXd u = solve_static(mesh, mat, load, solve);
                         Eigen::VectorXd z = result.model.autoencoder.encode(u);
                         pt.abs_err_raw = (pred.latent_means - z).cwiseAbs();
                         pt.abs_err_standardized =
                             pt.abs_err_raw.cwiseQuotient(target_std);
                         pt.fem_ok = true;
                     } catch (const NonConvergenceError&) {
                     } catch (const InvertedElementError&) {
                     }
                     if (!pt.fem_ok) {
                         pt.abs_err_raw = Eigen::VectorXd::Constant(
                             latent_dim, std::numeric_limits<double>::quiet_NaN());
                         pt.abs_err_standardized = pt.abs_err_raw;
                     }
                 });

    // 2D scatter over the extended square.
    result.scatter.resize(static_cast<std::size_t>(config.scatter_count));
    parallel_for(static_cast<std::size_t>(config.scatter_count), config.threads,
                 [&](std::size_t i) {
                     KeyedStream rng{config.scatter_seed, kTagScatter,
                                     static_cast<std::uint64_t>(i)};
                     ScatterPoint& pt = result.scatter[i];
                     pt.fx = rng.uniform(-extent, extent);
                     pt.fy = rng.uniform(-extent, extent);
                     pt.group = classify(std::hypot(pt.fx, pt.fy), config.mask_radius,
                                         config.force_range);

                     Eigen::VectorXd input = make_input(pt.fx, pt.fy);
                     PredictionField pred =
                         predict_full(result.model, input, kScatterCaseOffset + i);
                     pt.std_raw = pred.latent_vars.cwiseMax(0.0).cwiseSqrt();
                     pt.std_standardized = pt.std_raw.cwiseQuotient(target_std);
                 });

    // Scatter-group means per latent.
    result.group_mean_std_raw = Eigen::MatrixXd::Zero(3, latent_dim);
    result.group_mean_std_standardized = Eigen::MatrixXd::Zero(3, latent_dim);
    result.group_counts.setZero();
    for (const ScatterPoint& pt : result.scatter) {
        int g = static_cast<int>(pt.group);
        result.group_counts[g] += 1;
        result.group_mean_std_raw.row(g) += pt.std_raw.transpose();
        result.group_mean_std_standardized.row(g) += pt.std_standardized.transpose();
    }
    for (int g = 0; g < 3; ++g) {
        if (result.group_counts[g] > 0) {
            result.group_mean_std_raw.row(g) /= result.group_counts[g];
            result.group_mean_std_standardized.row(g) /= result.group_counts[g];
        } else {
            result.group_mean_std_raw.row(g).setConstant(
                std::numeric_limits<double>::quiet_NaN());
            result.group_mean_std_standardized.row(g).setConstant(
                std::numeric_limits<double>::quiet_NaN());
        }
    }
    return result;
}

}  // namespace latentgp
