#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "chanest/channel.hpp"

namespace chanest {

struct DatasetHeader {
    std::uint32_t n_bs = 0;
    std::uint32_t n_ue = 0;
    std::uint64_t count = 0;
    double carrier_hz = 0.0;
};

/// Binary dataset format (little-endian):
///   magic "CHDS", version u32 = 1, N_B u32, N_U u32, K u64,
///   carrier f64, 8 reserved bytes; then K records of
///   position (3 x f64) followed by the channel as N_B*N_U
///   (f64 real, f64 imag) pairs in column-major order.
void save_dataset(const std::filesystem::path& path, const std::vector<ChannelSample>& samples,
                  double carrier_hz);

/// Loads a dataset, validating magic, version, and payload length.
/// Throws FormatError (with byte offset) on malformed or truncated data.
std::vector<ChannelSample> load_dataset(const std::filesystem::path& path,
                                        DatasetHeader* header = nullptr);

}  // namespace chanest
