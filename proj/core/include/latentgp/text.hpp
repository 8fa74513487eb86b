#pragma once

#include <charconv>
#include <string>
#include <system_error>

namespace latentgp {

// Shortest decimal string that round-trips the double exactly.
// All numbers written to CSV or manifests go through here so that
// repeated runs produce byte-identical files.
inline std::string format_double(double x) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, res.ptr);
}

inline std::string format_int(long long x) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, res.ptr);
}

}  // namespace latentgp
