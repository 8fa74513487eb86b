#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include "latentgp/fem_dataset.hpp"

namespace latentgp {

// Dataset archive: manifest.json plus forces.bin / displacements.bin.
// The manifest records shapes, provenance (mesh, material, sampling
// parameters), and a SHA-256 of the blobs concatenated in manifest
// order. `config_echo` is the run configuration serialized as JSON and
// is embedded verbatim for traceability.
struct StoredDataset {
    Dataset data;
    MeshSpec mesh;
    MaterialParams material;
    double force_range = 0.0;
    std::uint64_t seed = 0;
};

void write_dataset(const std::filesystem::path& dir, const Dataset& data,
                   const MeshSpec& mesh, const MaterialParams& material, double force_range,
                   std::uint64_t seed,
                   const std::optional<std::string>& config_echo = std::nullopt);

// Verifies version, blob sizes, and the archive checksum, in that
// order, then reconstructs the dataset.
StoredDataset read_dataset(const std::filesystem::path& dir);

}  // namespace latentgp
