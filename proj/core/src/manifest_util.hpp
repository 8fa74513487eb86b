#pragma once

// Internal helpers shared by the archive readers and writers. Not
// installed; keeps the JSON dependency out of public headers.

#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <string>

#include "latentgp/errors.hpp"
#include "latentgp/material.hpp"
#include "latentgp/mesh.hpp"
#include "latentgp/storage.hpp"
#include "latentgp/text.hpp"

namespace latentgp::detail {

using nlohmann::json;

inline json read_json_file(const std::filesystem::path& file, const char* what) {
    std::ifstream in(file);
    if (!in)
        throw DataError(std::string(what) + " missing: '" + file.string() + "'");
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw DataError(std::string(what) + " '" + file.string() +
                        "' is not valid JSON: " + e.what());
    }
    return j;
}

inline void write_json_file(const std::filesystem::path& file, const json& j) {
    std::ofstream out(file, std::ios::binary);
    if (!out)
        throw DataError("cannot open '" + file.string() + "' for writing");
    out << j.dump(2) << "\n";
}

template <typename T>
T require(const json& j, const char* key) {
    if (!j.contains(key))
        throw DataError(std::string("manifest field '") + key + "' is missing");
    try {
        return j.at(key).get<T>();
    } catch (const json::exception&) {
        throw DataError(std::string("manifest field '") + key + "' has the wrong type");
    }
}

inline void check_format_version(const json& j) {
    int version = require<int>(j, "format_version");
    if (version != kFormatVersion)
        throw VersionMismatchError("archive format_version " + format_int(version) +
                                   ", reader supports " + format_int(kFormatVersion));
}

// Concatenated digest of the blobs in manifest order; compared against
// the stored checksum after sizes have been validated.
inline void verify_archive_checksum(const std::filesystem::path& dir, const json& manifest) {
    std::vector<std::filesystem::path> files;
    for (const json& blob : manifest.at("blobs"))
        files.push_back(dir / require<std::string>(blob, "name"));
    std::string expected = require<std::string>(manifest, "checksum");
    std::string actual = files_sha256(files);
    if (actual != expected)
        throw ChecksumMismatchError("archive checksum " + actual + " does not match manifest " +
                                    expected);
}

// Validates every listed blob's size, then the archive checksum; the
// required order for load-time integrity errors.
inline void validate_archive_blobs(const std::filesystem::path& dir, const json& manifest) {
    for (const json& blob : manifest.at("blobs"))
        check_blob_size(dir / require<std::string>(blob, "name"),
                        require<Eigen::Index>(blob, "rows"),
                        require<Eigen::Index>(blob, "cols"));
    verify_archive_checksum(dir, manifest);
}

inline const json& find_blob(const json& manifest, const std::string& name) {
    for (const json& blob : manifest.at("blobs"))
        if (require<std::string>(blob, "name") == name)
            return blob;
    throw DataError("manifest lists no blob named '" + name + "'");
}

inline Eigen::MatrixXd load_blob(const std::filesystem::path& dir, const json& manifest,
                                 const std::string& name) {
    const json& blob = find_blob(manifest, name);
    return read_matrix_blob(dir / name, require<Eigen::Index>(blob, "rows"),
                            require<Eigen::Index>(blob, "cols"));
}

inline json blob_entry(const std::string& name, Eigen::Index rows, Eigen::Index cols) {
    return json{{"name", name}, {"rows", rows}, {"cols", cols}};
}

inline json mesh_to_json(const MeshSpec& m) {
    return json{{"length", m.length}, {"height", m.height}, {"nx", m.nx}, {"ny", m.ny}};
}

inline MeshSpec mesh_from_json(const json& j) {
    MeshSpec m;
    m.length = require<double>(j, "length");
    m.height = require<double>(j, "height");
    m.nx = require<int>(j, "nx");
    m.ny = require<int>(j, "ny");
    return m;
}

inline json material_to_json(const MaterialParams& m) {
    return json{{"youngs_modulus", m.youngs_modulus},
                {"poisson_ratio", m.poisson_ratio},
                {"density", m.density}};
}

inline MaterialParams material_from_json(const json& j) {
    return MaterialParams::from_engineering(require<double>(j, "youngs_modulus"),
                                            require<double>(j, "poisson_ratio"),
                                            require<double>(j, "density"));
}

// Parses a serialized config echo so it embeds as structured JSON.
inline void embed_config_echo(json& manifest, const std::optional<std::string>& echo) {
    if (!echo)
        return;
    try {
        manifest["config_echo"] = json::parse(*echo);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config echo is not valid JSON: ") + e.what());
    }
}

}  // namespace latentgp::detail
