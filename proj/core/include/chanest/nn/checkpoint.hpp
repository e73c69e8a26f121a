#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "chanest/linalg.hpp"

namespace chanest::nn {

/// One named tensor in a checkpoint. Payload is row-major f64.
struct NamedTensor {
    std::string name;
    std::vector<std::uint32_t> dims;
    std::vector<double> data;

    static NamedTensor from_matrix(const std::string& name, const RealMatrix& m);
    static NamedTensor from_vector(const std::string& name, const RealVector& v);
    RealMatrix to_matrix() const;
    RealVector to_vector() const;
};

/// Checkpoint format (little-endian): magic "NNCK", version u32, tensor
/// count u32; per tensor: name length u16 + UTF-8 name, rank u8, dims u32
/// each, then the f64 payload row-major.
void save_checkpoint(const std::filesystem::path& path, const std::vector<NamedTensor>& tensors);

std::vector<NamedTensor> load_checkpoint(const std::filesystem::path& path);

/// Tensors keyed by name; throws FormatError on duplicates.
std::map<std::string, NamedTensor> load_checkpoint_map(const std::filesystem::path& path);

class Mlp;
class LstmStack;

/// Tensor naming: "<prefix>.<layer>.W" / "<prefix>.<layer>.b".
std::vector<NamedTensor> mlp_tensors(const Mlp& m, const std::string& prefix);
Mlp mlp_from_tensors(const std::map<std::string, NamedTensor>& tensors,
                     const std::string& prefix);

/// Tensor naming: "<prefix>.layer<l>.Wx" / ".Wh" / ".b".
std::vector<NamedTensor> lstm_tensors(const LstmStack& s, const std::string& prefix);
LstmStack lstm_from_tensors(const std::map<std::string, NamedTensor>& tensors,
                            const std::string& prefix);

}  // namespace chanest::nn
