#include "chanest/dataset_io.hpp"

#include <bit>
#include <cstring>
#include <fstream>

#include "chanest/errors.hpp"

namespace chanest {

namespace {

constexpr char kMagic[4] = {'C', 'H', 'D', 'S'};
constexpr std::uint32_t kVersion = 1;

static_assert(std::endian::native == std::endian::little,
              "dataset I/O assumes a little-endian host");

class Writer {
public:
    explicit Writer(const std::filesystem::path& path) : out_(path, std::ios::binary) {
        if (!out_) throw FormatError("cannot open '" + path.string() + "' for writing");
    }
    void bytes(const void* p, std::size_t n) { out_.write(static_cast<const char*>(p), n); }
    void u32(std::uint32_t v) { bytes(&v, sizeof v); }
    void u64(std::uint64_t v) { bytes(&v, sizeof v); }
    void f64(double v) { bytes(&v, sizeof v); }
    bool good() const { return out_.good(); }

private:
    std::ofstream out_;
};

class Reader {
public:
    explicit Reader(const std::filesystem::path& path) : in_(path, std::ios::binary) {
        if (!in_) throw FormatError("cannot open '" + path.string() + "' for reading");
    }
    void bytes(void* p, std::size_t n) {
        in_.read(static_cast<char*>(p), static_cast<std::streamsize>(n));
        if (static_cast<std::size_t>(in_.gcount()) != n) {
            throw FormatError("unexpected end of file", offset_ + static_cast<std::size_t>(
                                                                      std::max<std::streamsize>(
                                                                          in_.gcount(), 0)));
        }
        offset_ += n;
    }
    std::uint32_t u32() { std::uint32_t v; bytes(&v, sizeof v); return v; }
    std::uint64_t u64() { std::uint64_t v; bytes(&v, sizeof v); return v; }
    double f64() { double v; bytes(&v, sizeof v); return v; }
    std::size_t offset() const { return offset_; }

private:
    std::ifstream in_;
    std::size_t offset_ = 0;
};

}  // namespace

void save_dataset(const std::filesystem::path& path, const std::vector<ChannelSample>& samples,
                  double carrier_hz) {
    if (samples.empty()) throw std::invalid_argument("save_dataset: no samples");
    const Eigen::Index nb = samples.front().H.rows();
    const Eigen::Index nu = samples.front().H.cols();

    Writer w(path);
    w.bytes(kMagic, 4);
    w.u32(kVersion);
    w.u32(static_cast<std::uint32_t>(nb));
    w.u32(static_cast<std::uint32_t>(nu));
    w.u64(samples.size());
    w.f64(carrier_hz);
    w.u64(0);  // reserved

    for (const ChannelSample& s : samples) {
        if (s.H.rows() != nb || s.H.cols() != nu) {
            throw std::invalid_argument("save_dataset: inconsistent channel dimensions");
        }
        for (int i = 0; i < 3; ++i) w.f64(s.position[i]);
        // column-major entry order matches Eigen's storage
        for (Eigen::Index k = 0; k < s.H.size(); ++k) {
            const std::complex<double> z = *(s.H.data() + k);
            w.f64(z.real());
            w.f64(z.imag());
        }
    }
    if (!w.good()) throw FormatError("write to '" + path.string() + "' failed");
}

std::vector<ChannelSample> load_dataset(const std::filesystem::path& path,
                                        DatasetHeader* header) {
    Reader r(path);
    char magic[4];
    r.bytes(magic, 4);
    if (std::memcmp(magic, kMagic, 4) != 0) {
        throw FormatError("bad magic, not a dataset file", 0);
    }
    const std::uint32_t version = r.u32();
    if (version != kVersion) {
        throw FormatError("unsupported dataset version " + std::to_string(version), 4);
    }
    DatasetHeader h;
    h.n_bs = r.u32();
    h.n_ue = r.u32();
    h.count = r.u64();
    h.carrier_hz = r.f64();
    r.u64();  // reserved
    if (h.n_bs == 0 || h.n_ue == 0) {
        throw FormatError("zero antenna count in header", 8);
    }

    std::vector<ChannelSample> samples;
    samples.reserve(h.count);
    for (std::uint64_t k = 0; k < h.count; ++k) {
        ChannelSample s;
        for (int i = 0; i < 3; ++i) s.position[i] = r.f64();
        s.H.resize(h.n_bs, h.n_ue);
        for (Eigen::Index e = 0; e < s.H.size(); ++e) {
            const double re = r.f64();
            const double im = r.f64();
            *(s.H.data() + e) = {re, im};
        }
        samples.push_back(std::move(s));
    }
    if (header) *header = h;
    return samples;
}

}  // namespace chanest
