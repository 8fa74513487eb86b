#include "latentgp/fem_dataset.hpp"

#include <atomic>

#include "latentgp/errors.hpp"
#include "latentgp/parallel.hpp"
#include "latentgp/rng.hpp"
#include "latentgp/text.hpp"

namespace latentgp {
namespace {

constexpr int kMaxAttemptsPerSample = 64;

LoadSpec draw_load(const Mesh2D& mesh, LoadKind kind, double force_range, KeyedStream& rng) {
    if (kind == LoadKind::PointLoad) {
        double fx = rng.uniform(-force_range, force_range);
        double fy = rng.uniform(-force_range, force_range);
        auto pick = static_cast<std::size_t>(rng.bounded(mesh.loadable_nodes.size()));
        return LoadSpec::point(fx, fy, mesh.loadable_distance[pick]);
    }
    double bx = rng.uniform(-force_range, force_range);
    double by = rng.uniform(-force_range, force_range);
    return LoadSpec::body(bx, by);
}

}  // namespace

Dataset generate_dataset(const Mesh2D& mesh, const MaterialParams& mat, LoadKind kind,
                         double force_range, int n_samples, std::uint64_t seed,
                         const SolveSettings& solve, int threads, int sample_index_offset) {
    if (n_samples < 1)
        throw ConfigError("dataset needs at least one sample");
    if (!(force_range > 0.0))
        throw ConfigError("force_range must be positive");
    if (kind == LoadKind::PointLoad && mesh.loadable_nodes.empty())
        throw ConfigError("point-load dataset requires loadable nodes");
    if (kind == LoadKind::BodyForce && !(mat.density > 0.0))
        throw ConfigError("body-force dataset requires positive material density");

    Dataset data;
    data.kind = kind;
    data.forces.resize(n_samples, LoadSpec::input_dim(kind));
    data.displacements.resize(n_samples, mesh.n_dofs());

    std::atomic<int> failures{0};

    parallel_for(static_cast<std::size_t>(n_samples), threads, [&](std::size_t i) {
        const auto index = static_cast<std::uint64_t>(sample_index_offset) + i;
        for (int attempt = 0;; ++attempt) {
            if (attempt >= kMaxAttemptsPerSample)
                throw TooManyFailuresError("sample " + format_int(static_cast<long long>(index)) +
                                           " failed " + format_int(kMaxAttemptsPerSample) +
                                           " consecutive solves");
            KeyedStream rng{seed, kTagDataset, index, static_cast<std::uint64_t>(attempt)};
            LoadSpec load = draw_load(mesh, kind, force_range, rng);
            try {
                Eigen::VectorXd u = solve_static(mesh, mat, load, solve);
                data.forces.row(static_cast<Eigen::Index>(i)) = load.to_vector().transpose();
                data.displacements.row(static_cast<Eigen::Index>(i)) = u.transpose();
                break;
            } catch (const NonConvergenceError&) {
            } catch (const InvertedElementError&) {
            }
            int total = failures.fetch_add(1) + 1;
            if (total > n_samples)
                throw TooManyFailuresError(
                    "dataset generation resample rate exceeded 50% (" + format_int(total) +
                    " failures for " + format_int(n_samples) + " samples)");
        }
    });

    data.generation_failures = failures.load();
    return data;
}

}  // namespace latentgp
