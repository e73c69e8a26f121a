#include "chanest/nn/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fstream>

#include "chanest/errors.hpp"
#include "chanest/nn/lstm.hpp"
#include "chanest/nn/mlp.hpp"

namespace chanest::nn {

namespace {

constexpr char kMagic[4] = {'N', 'N', 'C', 'K'};
constexpr std::uint32_t kVersion = 1;

static_assert(std::endian::native == std::endian::little,
              "checkpoint I/O assumes a little-endian host");

std::size_t element_count(const std::vector<std::uint32_t>& dims) {
    std::size_t n = 1;
    for (std::uint32_t d : dims) n *= d;
    return n;
}

}  // namespace

NamedTensor NamedTensor::from_matrix(const std::string& name, const RealMatrix& m) {
    NamedTensor t;
    t.name = name;
    t.dims = {static_cast<std::uint32_t>(m.rows()), static_cast<std::uint32_t>(m.cols())};
    t.data.resize(static_cast<std::size_t>(m.size()));
    // row-major payload
    Eigen::Map<Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
        t.data.data(), m.rows(), m.cols()) = m;
    return t;
}

NamedTensor NamedTensor::from_vector(const std::string& name, const RealVector& v) {
    NamedTensor t;
    t.name = name;
    t.dims = {static_cast<std::uint32_t>(v.size())};
    t.data.assign(v.data(), v.data() + v.size());
    return t;
}

RealMatrix NamedTensor::to_matrix() const {
    if (dims.size() != 2) throw FormatError("tensor '" + name + "' is not rank 2");
    return Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic,
                                          Eigen::RowMajor>>(data.data(), dims[0], dims[1]);
}

RealVector NamedTensor::to_vector() const {
    if (dims.size() != 1) throw FormatError("tensor '" + name + "' is not rank 1");
    return Eigen::Map<const RealVector>(data.data(), static_cast<Eigen::Index>(dims[0]));
}

void save_checkpoint(const std::filesystem::path& path,
                     const std::vector<NamedTensor>& tensors) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw FormatError("cannot open '" + path.string() + "' for writing");
    auto put = [&out](const void* p, std::size_t n) {
        out.write(static_cast<const char*>(p), static_cast<std::streamsize>(n));
    };
    put(kMagic, 4);
    put(&kVersion, 4);
    const std::uint32_t count = static_cast<std::uint32_t>(tensors.size());
    put(&count, 4);
    for (const NamedTensor& t : tensors) {
        if (t.name.size() > 0xffff) throw FormatError("tensor name too long: " + t.name);
        const std::uint16_t len = static_cast<std::uint16_t>(t.name.size());
        put(&len, 2);
        put(t.name.data(), t.name.size());
        const std::uint8_t rank = static_cast<std::uint8_t>(t.dims.size());
        put(&rank, 1);
        for (std::uint32_t d : t.dims) put(&d, 4);
        if (t.data.size() != element_count(t.dims)) {
            throw FormatError("tensor '" + t.name + "' payload does not match dims");
        }
        put(t.data.data(), t.data.size() * sizeof(double));
    }
    if (!out.good()) throw FormatError("write to '" + path.string() + "' failed");
}

std::vector<NamedTensor> load_checkpoint(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError("cannot open '" + path.string() + "' for reading");
    std::size_t offset = 0;
    auto get = [&](void* p, std::size_t n) {
        in.read(static_cast<char*>(p), static_cast<std::streamsize>(n));
        if (static_cast<std::size_t>(in.gcount()) != n) {
            throw FormatError("unexpected end of checkpoint", offset);
        }
        offset += n;
    };
    char magic[4];
    get(magic, 4);
    if (std::memcmp(magic, kMagic, 4) != 0) throw FormatError("bad magic, not a checkpoint", 0);
    std::uint32_t version = 0;
    get(&version, 4);
    if (version != kVersion) {
        throw FormatError("unsupported checkpoint version " + std::to_string(version), 4);
    }
    std::uint32_t count = 0;
    get(&count, 4);

    std::vector<NamedTensor> tensors;
    tensors.reserve(count);
    for (std::uint32_t k = 0; k < count; ++k) {
        NamedTensor t;
        std::uint16_t len = 0;
        get(&len, 2);
        t.name.resize(len);
        get(t.name.data(), len);
        std::uint8_t rank = 0;
        get(&rank, 1);
        t.dims.resize(rank);
        for (std::uint8_t r = 0; r < rank; ++r) get(&t.dims[r], 4);
        t.data.resize(element_count(t.dims));
        get(t.data.data(), t.data.size() * sizeof(double));
        tensors.push_back(std::move(t));
    }
    return tensors;
}

std::map<std::string, NamedTensor> load_checkpoint_map(const std::filesystem::path& path) {
    std::map<std::string, NamedTensor> out;
    for (NamedTensor& t : load_checkpoint(path)) {
        const std::string name = t.name;
        if (!out.emplace(name, std::move(t)).second) {
            throw FormatError("duplicate tensor name '" + name + "'");
        }
    }
    return out;
}

std::vector<NamedTensor> mlp_tensors(const Mlp& m, const std::string& prefix) {
    std::vector<NamedTensor> out;
    out.reserve(2 * m.layers().size());
    for (std::size_t l = 0; l < m.layers().size(); ++l) {
        const std::string base = prefix + "." + std::to_string(l) + ".";
        out.push_back(NamedTensor::from_matrix(base + "W", m.layers()[l].W));
        out.push_back(NamedTensor::from_vector(base + "b", m.layers()[l].b));
    }
    return out;
}

Mlp mlp_from_tensors(const std::map<std::string, NamedTensor>& tensors,
                     const std::string& prefix) {
    std::vector<DenseLayer> layers;
    for (std::size_t l = 0;; ++l) {
        const std::string base = prefix + "." + std::to_string(l) + ".";
        const auto w = tensors.find(base + "W");
        if (w == tensors.end()) break;
        const auto b = tensors.find(base + "b");
        if (b == tensors.end()) throw FormatError("missing tensor '" + base + "b'");
        layers.push_back({w->second.to_matrix(), b->second.to_vector(), Activation::kRelu});
    }
    if (layers.empty()) throw FormatError("no '" + prefix + ".*' tensors in checkpoint");
    layers.back().act = Activation::kLinear;
    return Mlp::from_layers(std::move(layers));
}

std::vector<NamedTensor> lstm_tensors(const LstmStack& s, const std::string& prefix) {
    std::vector<NamedTensor> out;
    out.reserve(3 * s.layers().size());
    for (std::size_t l = 0; l < s.layers().size(); ++l) {
        const std::string base = prefix + ".layer" + std::to_string(l) + ".";
        out.push_back(NamedTensor::from_matrix(base + "Wx", s.layers()[l].Wx));
        out.push_back(NamedTensor::from_matrix(base + "Wh", s.layers()[l].Wh));
        out.push_back(NamedTensor::from_vector(base + "b", s.layers()[l].b));
    }
    return out;
}

LstmStack lstm_from_tensors(const std::map<std::string, NamedTensor>& tensors,
                            const std::string& prefix) {
    std::vector<LstmLayer> layers;
    for (std::size_t l = 0;; ++l) {
        const std::string base = prefix + ".layer" + std::to_string(l) + ".";
        const auto wx = tensors.find(base + "Wx");
        if (wx == tensors.end()) break;
        const auto wh = tensors.find(base + "Wh");
        const auto b = tensors.find(base + "b");
        if (wh == tensors.end() || b == tensors.end()) {
            throw FormatError("incomplete LSTM layer '" + base + "*'");
        }
        layers.push_back({wx->second.to_matrix(), wh->second.to_matrix(),
                          b->second.to_vector()});
    }
    if (layers.empty()) throw FormatError("no '" + prefix + ".layer*' tensors in checkpoint");
    return LstmStack::from_layers(std::move(layers));
}

}  // namespace chanest::nn
