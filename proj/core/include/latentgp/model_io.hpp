#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "latentgp/surrogate.hpp"

namespace latentgp {

// Serialized surrogate. The GP bundle is optional so that a run
// training only the autoencoder stage still produces a loadable
// archive; converting to a SurrogateModel then requires the bundle.
struct ModelArchive {
    AutoencoderModel autoencoder;
    std::optional<LatentGpBundle> bundle;
    int sample_count = 300;
    std::uint64_t mc_seed = 0;
    LoadKind kind = LoadKind::PointLoad;
    MeshSpec mesh;
    MaterialParams material;
    double force_range = 0.0;
};

SurrogateModel to_surrogate(const ModelArchive& archive);  // DataError without a bundle

// Model archive: manifest.json plus weights.bin (flat autoencoder
// parameters) and, when the bundle is present, gp_inputs.bin /
// gp_targets.bin with the shared training inputs and raw latent
// targets. GP hyperparameters, standardizers, and degeneracy flags
// live in the manifest; the predictor state is rebuilt on load.
void write_model(const std::filesystem::path& dir, const ModelArchive& archive,
                 const PipelineReport* report = nullptr,
                 const std::optional<std::string>& config_echo = std::nullopt);

ModelArchive read_model(const std::filesystem::path& dir);

}  // namespace latentgp
