#pragma once

#include <Eigen/Dense>
#include <filesystem>
#include <string>
#include <vector>

namespace latentgp {

// Archive format version; bumped on any layout change.
inline constexpr int kFormatVersion = 1;

// Binary blobs hold row-major little-endian float64 payloads; shapes
// live in the manifest. Readers check size before content, so a short
// file raises TruncatedBlobError rather than a checksum failure.
void write_matrix_blob(const std::filesystem::path& file, const Eigen::MatrixXd& m);
Eigen::MatrixXd read_matrix_blob(const std::filesystem::path& file, Eigen::Index rows,
                                 Eigen::Index cols);

// Size validation alone: DataError when the file is absent,
// TruncatedBlobError when its length disagrees with the shape.
void check_blob_size(const std::filesystem::path& file, Eigen::Index rows, Eigen::Index cols);

// Streaming SHA-256 of a file's bytes; DataError if unreadable.
std::string file_sha256(const std::filesystem::path& file);

// SHA-256 of several files' bytes concatenated in order; archive
// checksums hash the blobs in manifest order.
std::string files_sha256(const std::vector<std::filesystem::path>& files);

}  // namespace latentgp
