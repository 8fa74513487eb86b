#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace latentgp {

// Incremental SHA-256. Archives hash their binary blobs in manifest
// order and store the hex digest for integrity checking on load.
class Sha256 {
public:
    Sha256();
    ~Sha256();
    Sha256(const Sha256&) = delete;
    Sha256& operator=(const Sha256&) = delete;

    void update(const void* data, std::size_t size);
    void update(const std::vector<std::uint8_t>& bytes);

    // Finalizes and returns the lowercase hex digest. The hasher must
    // not be reused afterwards.
    std::string hex_digest();

private:
    void* ctx_;
};

std::string sha256_hex(const void* data, std::size_t size);

}  // namespace latentgp
