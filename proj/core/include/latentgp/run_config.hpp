#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "latentgp/experiment.hpp"
#include "latentgp/load.hpp"
#include "latentgp/material.hpp"
#include "latentgp/mesh.hpp"
#include "latentgp/solver.hpp"
#include "latentgp/surrogate.hpp"

namespace latentgp {

// Everything a run needs, with the canonical cantilever defaults.
// Parsed from JSON with strict key checking; every archive written by
// the tools embeds the originating config as `config_echo`.
struct RunConfig {
    std::uint64_t seed = 1;
    int threads = 1;

    MeshSpec mesh;

    struct Material {
        double youngs_modulus = 500.0;
        double poisson_ratio = 0.4;
        double density = 1000.0;
    } material;

    SolveSettings solver;

    struct DatasetSection {
        LoadKind load_kind = LoadKind::PointLoad;
        double force_range = 2.5;
        int n_train = 600;
        int n_test = 60;
    } dataset;

    struct AutoencoderSection {
        std::vector<int> widths = {256, 128, 64, 32};
        int latent_dim = 4;
        int epochs = 2000;
        int batch_size = 16;
        double lr_start = 1e-4;
        double lr_end = 1e-6;
        double adam_beta1 = 0.9;
        double adam_beta2 = 0.999;
        double adam_epsilon = 1e-8;
    } autoencoder;

    struct GpSection {
        int restarts = 5;
        int max_iterations = 100;
        double gradient_tolerance = 1e-6;
        double noise_floor = 1e-8;
        double initial_noise = 0.1;
    } gp;

    struct SurrogateSection {
        int sample_count = 300;
    } surrogate;

    struct ExperimentSection {
        double mask_ratio = 0.4;  // mask radius = ratio * force_range
        double sweep_extension = 1.2;
        int sweep_points = 61;
        int scatter_count = 200;
        double attach_distance = -1.0;  // negative: farthest loadable node
    } experiment;

    static RunConfig from_json_text(const std::string& text);
    static RunConfig from_file(const std::filesystem::path& file);
    std::string to_json_text() const;

    void validate() const;  // throws ConfigError

    // Derived component configurations.
    MaterialParams material_params() const;
    TrainConfig ae_train_config() const;
    PipelineConfig pipeline_config() const;  // input_dim left 0, inferred from data
    GpFitOptions gp_options() const;
    MissingRegionConfig experiment_config() const;
};

}  // namespace latentgp
