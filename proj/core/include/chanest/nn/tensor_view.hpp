#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace chanest::nn {

/// Non-owning view of one parameter (or gradient) tensor's storage.
struct TensorView {
    double* data = nullptr;
    Eigen::Index size = 0;
};

inline std::size_t total_size(const std::vector<TensorView>& views) {
    std::size_t n = 0;
    for (const TensorView& v : views) n += static_cast<std::size_t>(v.size);
    return n;
}

/// FNV-1a over the raw parameter bytes; used to assert that frozen
/// parameters were left untouched.
inline std::uint64_t params_checksum(const std::vector<TensorView>& views) {
    std::uint64_t hash = 1469598103934665603ull;
    for (const TensorView& v : views) {
        const unsigned char* bytes = reinterpret_cast<const unsigned char*>(v.data);
        for (std::size_t i = 0; i < static_cast<std::size_t>(v.size) * sizeof(double); ++i) {
            hash ^= bytes[i];
            hash *= 1099511628211ull;
        }
    }
    return hash;
}

}  // namespace chanest::nn
