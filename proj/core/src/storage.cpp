#include "latentgp/storage.hpp"

#include <bit>
#include <cstdio>
#include <memory>
#include <vector>

#include "latentgp/checksum.hpp"
#include "latentgp/errors.hpp"
#include "latentgp/text.hpp"

static_assert(std::endian::native == std::endian::little,
              "blob format assumes a little-endian host");

namespace latentgp {
namespace {

struct FileCloser {
    void operator()(std::FILE* f) const {
        if (f)
            std::fclose(f);
    }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

}  // namespace

void write_matrix_blob(const std::filesystem::path& file, const Eigen::MatrixXd& m) {
    FilePtr f(std::fopen(file.string().c_str(), "wb"));
    if (!f)
        throw DataError("cannot open '" + file.string() + "' for writing");
    // Row-major on disk regardless of in-memory layout.
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        Eigen::RowVectorXd row = m.row(i);
        if (std::fwrite(row.data(), sizeof(double), static_cast<std::size_t>(row.size()),
                        f.get()) != static_cast<std::size_t>(row.size()))
            throw DataError("short write to '" + file.string() + "'");
    }
}

void check_blob_size(const std::filesystem::path& file, Eigen::Index rows, Eigen::Index cols) {
    std::error_code ec;
    auto actual = std::filesystem::file_size(file, ec);
    if (ec)
        throw DataError("missing blob '" + file.string() + "'");
    const auto expected = static_cast<std::uintmax_t>(rows) * static_cast<std::uintmax_t>(cols) *
                          sizeof(double);
    if (actual != expected)
        throw TruncatedBlobError("blob '" + file.string() + "' holds " +
                                 format_int(static_cast<long long>(actual)) +
                                 " bytes, manifest expects " +
                                 format_int(static_cast<long long>(expected)));
}

Eigen::MatrixXd read_matrix_blob(const std::filesystem::path& file, Eigen::Index rows,
                                 Eigen::Index cols) {
    check_blob_size(file, rows, cols);

    FilePtr f(std::fopen(file.string().c_str(), "rb"));
    if (!f)
        throw DataError("cannot open '" + file.string() + "' for reading");
    Eigen::MatrixXd m(rows, cols);
    std::vector<double> row(static_cast<std::size_t>(cols));
    for (Eigen::Index i = 0; i < rows; ++i) {
        if (std::fread(row.data(), sizeof(double), row.size(), f.get()) != row.size())
            throw TruncatedBlobError("blob '" + file.string() + "' ended mid-row");
        for (Eigen::Index j = 0; j < cols; ++j)
            m(i, j) = row[static_cast<std::size_t>(j)];
    }
    return m;
}

namespace {

void hash_file_into(Sha256& hasher, const std::filesystem::path& file) {
    FilePtr f(std::fopen(file.string().c_str(), "rb"));
    if (!f)
        throw DataError("cannot open '" + file.string() + "' for hashing");
    std::vector<unsigned char> buf(1 << 16);
    for (;;) {
        std::size_t got = std::fread(buf.data(), 1, buf.size(), f.get());
        if (got > 0)
            hasher.update(buf.data(), got);
        if (got < buf.size())
            break;
    }
}

}  // namespace

std::string file_sha256(const std::filesystem::path& file) {
    Sha256 hasher;
    hash_file_into(hasher, file);
    return hasher.hex_digest();
}

std::string files_sha256(const std::vector<std::filesystem::path>& files) {
    Sha256 hasher;
    for (const auto& file : files)
        hash_file_into(hasher, file);
    return hasher.hex_digest();
}

}  // namespace latentgp
