#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "chanest/linalg.hpp"

namespace chanest {

using Vec3 = Eigen::Vector3d;

/// Uniform planar array: rows x cols elements with the given spacing in
/// wavelengths. The array broadside is the local +x axis; elements are laid
/// out on the local y (row index) and z (column index) axes.
struct ArrayGeometry {
    int rows = 1;
    int cols = 1;
    double element_spacing = 0.5;  // wavelengths

    int num_antennas() const { return rows * cols; }
};

/// One propagation path: complex gain plus (azimuth, elevation) angle pairs
/// at the receiving and transmitting arrays.
struct PathParam {
    std::complex<double> gain;   // dimensionless
    double aoa_az = 0.0;         // radians, arrival at the BS
    double aoa_el = 0.0;
    double aod_az = 0.0;         // radians, departure at the UE
    double aod_el = 0.0;
};

/// Dataset atom: channel matrix and the user position it was generated at.
struct ChannelSample {
    ComplexMatrix H;  // N_B x N_U
    Vec3 position = Vec3::Zero();  // meters
};

/// Synthetic scene: a fixed BS, a set of single-bounce scatterers, and the
/// array geometries at both ends. Stands in for externally ray-traced data.
struct SceneConfig {
    ArrayGeometry bs_geometry{10, 10, 0.5};
    ArrayGeometry ue_geometry{2, 2, 0.5};
    Vec3 bs_position = Vec3(0.0, 0.0, 10.0);
    int num_paths = 1;                    // LoS plus (num_paths - 1) scattered paths
    std::vector<Vec3> scatterer_positions;
    double carrier_hz = 3.5e9;
    std::uint64_t rng_seed = 1;
};

/// Axis-aligned sampling region.
struct AxisBox {
    Vec3 lo = Vec3::Zero();
    Vec3 hi = Vec3::Zero();

    Vec3 center() const { return 0.5 * (lo + hi); }
    bool contains(const Vec3& p, double slack = 1e-9) const {
        return (p.array() >= lo.array() - slack).all() &&
               (p.array() <= hi.array() + slack).all();
    }
};

/// Array response vector for a UPA. Entries are
/// exp(j*2*pi*spacing*(m*sin(az)*cos(el) + n*sin(el))) over grid indices
/// (m, n) = (row, col), flattened column-major. Every entry has modulus 1.
ComplexVector steering(const ArrayGeometry& geom, double azimuth, double elevation);

/// Multipath channel: sqrt(N_B*N_U/L) * sum_l gain_l * a_B(aoa_l) * a_U(aod_l)^H.
/// Throws std::invalid_argument on an empty path list.
ComplexMatrix synth_channel(const SceneConfig& scene, const std::vector<PathParam>& paths);

/// Deterministic geometric path list for a user at p: a LoS path plus one
/// single-bounce path per scatterer used (num_paths - 1 of them). Gains decay
/// with traveled distance and carry the corresponding carrier phase.
/// Throws std::invalid_argument if p coincides with the BS or a scatterer.
std::vector<PathParam> paths_from_position(const SceneConfig& scene, const Vec3& p);

/// K samples with positions on a seeded jittered grid over the region.
/// K = 1 yields a single sample at the region center.
std::vector<ChannelSample> gen_dataset(const SceneConfig& scene, const AxisBox& region, int count);

/// T samples along p(t) = start + t*dt*velocity, t = 0..T-1.
/// Throws std::invalid_argument if any position leaves the region.
std::vector<ChannelSample> gen_trajectory(const SceneConfig& scene, const AxisBox& region,
                                          const Vec3& start, const Vec3& velocity, int length,
                                          double dt);

}  // namespace chanest
