#include "latentgp/dataset_io.hpp"

#include "latentgp/load.hpp"
#include "manifest_util.hpp"

namespace latentgp {

using detail::json;

void write_dataset(const std::filesystem::path& dir, const Dataset& data,
                   const MeshSpec& mesh, const MaterialParams& material, double force_range,
                   std::uint64_t seed, const std::optional<std::string>& config_echo) {
    if (data.n() < 1)
        throw ShapeError("refusing to store an empty dataset");
    std::filesystem::create_directories(dir);

    write_matrix_blob(dir / "forces.bin", data.forces);
    write_matrix_blob(dir / "displacements.bin", data.displacements);

    json manifest;
    manifest["format_version"] = kFormatVersion;
    manifest["kind"] = "dataset";
    manifest["load_kind"] = load_kind_name(data.kind);
    manifest["n_samples"] = data.n();
    manifest["input_dim"] = data.input_dim();
    manifest["field_dim"] = data.field_dim();
    manifest["force_range"] = force_range;
    manifest["seed"] = seed;
    manifest["generation_failures"] = data.generation_failures;
    manifest["mesh"] = detail::mesh_to_json(mesh);
    manifest["material"] = detail::material_to_json(material);
    manifest["blobs"] = json::array({
        detail::blob_entry("forces.bin", data.forces.rows(), data.forces.cols()),
        detail::blob_entry("displacements.bin", data.displacements.rows(),
                           data.displacements.cols()),
    });
    manifest["checksum"] =
        files_sha256({dir / "forces.bin", dir / "displacements.bin"});
    detail::embed_config_echo(manifest, config_echo);

    detail::write_json_file(dir / "manifest.json", manifest);
}

StoredDataset read_dataset(const std::filesystem::path& dir) {
    json manifest = detail::read_json_file(dir / "manifest.json", "dataset manifest");
    detail::check_format_version(manifest);
    if (detail::require<std::string>(manifest, "kind") != "dataset")
        throw DataError("archive at '" + dir.string() + "' is not a dataset");

    detail::validate_archive_blobs(dir, manifest);

    StoredDataset out;
    out.data.kind = load_kind_from_name(detail::require<std::string>(manifest, "load_kind"));
    out.data.forces = detail::load_blob(dir, manifest, "forces.bin");
    out.data.displacements = detail::load_blob(dir, manifest, "displacements.bin");
    out.data.generation_failures = detail::require<int>(manifest, "generation_failures");
    out.mesh = detail::mesh_from_json(manifest.at("mesh"));
    out.material = detail::material_from_json(manifest.at("material"));
    out.force_range = detail::require<double>(manifest, "force_range");
    out.seed = detail::require<std::uint64_t>(manifest, "seed");

    const int n = detail::require<int>(manifest, "n_samples");
    if (out.data.n() != n ||
        out.data.input_dim() != detail::require<int>(manifest, "input_dim") ||
        out.data.field_dim() != detail::require<int>(manifest, "field_dim"))
        throw DataError("dataset blob shapes disagree with manifest header");
    if (out.data.input_dim() != LoadSpec::input_dim(out.data.kind))
        throw DataError("dataset input dimension does not match its load kind");
    return out;
}

}  // namespace latentgp
