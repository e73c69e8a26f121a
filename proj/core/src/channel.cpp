#include "chanest/channel.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "chanest/rng.hpp"

namespace chanest {

namespace {

constexpr double kSpeedOfLight = 299792458.0;
constexpr double kMinSeparation = 1e-9;  // meters

struct AnglePair {
    double az;
    double el;
};

// Angles of the unit direction u expressed in a frame whose broadside is +x.
AnglePair angles_in_frame(const Vec3& u) {
    double el = std::asin(std::clamp(u.z(), -1.0, 1.0));
    double az = std::atan2(u.y(), u.x());
    return {az, el};
}

// The UE array faces the BS side: its local frame is the global frame
// rotated by pi about z, so local broadside (-x global) sees azimuth 0.
AnglePair ue_angles(const Vec3& u) {
    return angles_in_frame(Vec3(-u.x(), -u.y(), u.z()));
}

}  // namespace

ComplexVector steering(const ArrayGeometry& geom, double azimuth, double elevation) {
    const int rows = geom.rows;
    const int cols = geom.cols;
    ComplexVector a(static_cast<Eigen::Index>(rows) * cols);
    const double u = std::sin(azimuth) * std::cos(elevation);
    const double w = std::sin(elevation);
    for (int n = 0; n < cols; ++n) {
        for (int m = 0; m < rows; ++m) {
            const double phase = 2.0 * M_PI * geom.element_spacing * (m * u + n * w);
            a(static_cast<Eigen::Index>(n) * rows + m) = std::polar(1.0, phase);
        }
    }
    return a;
}

ComplexMatrix synth_channel(const SceneConfig& scene, const std::vector<PathParam>& paths) {
    if (paths.empty()) {
        throw std::invalid_argument("synth_channel: path list is empty");
    }
    const int nb = scene.bs_geometry.num_antennas();
    const int nu = scene.ue_geometry.num_antennas();
    ComplexMatrix h = ComplexMatrix::Zero(nb, nu);
    for (const PathParam& path : paths) {
        const ComplexVector ab = steering(scene.bs_geometry, path.aoa_az, path.aoa_el);
        const ComplexVector au = steering(scene.ue_geometry, path.aod_az, path.aod_el);
        h.noalias() += path.gain * (ab * au.adjoint());
    }
    const double scale =
        std::sqrt(static_cast<double>(nb) * nu / static_cast<double>(paths.size()));
    return scale * h;
}

std::vector<PathParam> paths_from_position(const SceneConfig& scene, const Vec3& p) {
    if (scene.num_paths < 1) {
        throw std::invalid_argument("paths_from_position: num_paths must be >= 1");
    }
    const int num_scattered = scene.num_paths - 1;
    if (static_cast<int>(scene.scatterer_positions.size()) < num_scattered) {
        throw std::invalid_argument("paths_from_position: scene has " +
                                    std::to_string(scene.scatterer_positions.size()) +
                                    " scatterers, needs " + std::to_string(num_scattered));
    }
    const double lambda = kSpeedOfLight / scene.carrier_hz;
    std::vector<PathParam> paths;
    paths.reserve(scene.num_paths);

    // Line-of-sight
    {
        const Vec3 diff = p - scene.bs_position;
        const double d = diff.norm();
        if (d < kMinSeparation) {
            throw std::invalid_argument("paths_from_position: user coincides with the BS");
        }
        const Vec3 u = diff / d;
        const AnglePair aoa = angles_in_frame(u);
        const AnglePair aod = ue_angles(-u);  // direction UE -> BS
        PathParam los;
        los.gain = std::polar(1.0 / d, -2.0 * M_PI * d / lambda);
        los.aoa_az = aoa.az;
        los.aoa_el = aoa.el;
        los.aod_az = aod.az;
        los.aod_el = aod.el;
        paths.push_back(los);
    }

    for (int s = 0; s < num_scattered; ++s) {
        const Vec3& scat = scene.scatterer_positions[static_cast<std::size_t>(s)];
        const Vec3 bs_leg = scat - scene.bs_position;
        const Vec3 ue_leg = scat - p;
        const double d1 = bs_leg.norm();
        const double d2 = ue_leg.norm();
        if (d1 < kMinSeparation || d2 < kMinSeparation) {
            throw std::invalid_argument("paths_from_position: scatterer " + std::to_string(s) +
                                        " coincides with the BS or the user");
        }
        const AnglePair aoa = angles_in_frame(bs_leg / d1);
        const AnglePair aod = ue_angles(ue_leg / d2);
        PathParam path;
        path.gain = std::polar(1.0 / (d1 * d2), -2.0 * M_PI * (d1 + d2) / lambda);
        path.aoa_az = aoa.az;
        path.aoa_el = aoa.el;
        path.aod_az = aod.az;
        path.aod_el = aod.el;
        paths.push_back(path);
    }
    return paths;
}

std::vector<ChannelSample> gen_dataset(const SceneConfig& scene, const AxisBox& region,
                                       int count) {
    if (count < 1) {
        throw std::invalid_argument("gen_dataset: count must be >= 1");
    }
    const Vec3 extent = region.hi - region.lo;
    if ((extent.array() < 0.0).any()) {
        throw std::invalid_argument("gen_dataset: region has negative extent");
    }
    if (count > 1 && extent.maxCoeff() <= 0.0) {
        throw std::invalid_argument("gen_dataset: degenerate (single-point) region");
    }

    std::vector<ChannelSample> samples;
    samples.reserve(static_cast<std::size_t>(count));

    if (count == 1) {
        const Vec3 p = region.center();
        samples.push_back({synth_channel(scene, paths_from_position(scene, p)), p});
        return samples;
    }

    // Grid sized so cells stay roughly isotropic across the active axes.
    int n[3] = {1, 1, 1};
    auto cells = [&] { return static_cast<long>(n[0]) * n[1] * n[2]; };
    while (cells() < count) {
        int widest = -1;
        double widest_cell = 0.0;
        for (int i = 0; i < 3; ++i) {
            if (extent[i] <= 0.0) continue;
            const double cell = extent[i] / n[i];
            if (cell > widest_cell) {
                widest_cell = cell;
                widest = i;
            }
        }
        n[widest] += 1;
    }

    Rng rng(scene.rng_seed);
    const long total = cells();
    for (int k = 0; k < count; ++k) {
        // Spread the K picks evenly over the grid cells.
        const long cell = static_cast<long>(static_cast<double>(k) * total / count);
        const long ix = cell % n[0];
        const long iy = (cell / n[0]) % n[1];
        const long iz = cell / (static_cast<long>(n[0]) * n[1]);
        Vec3 p;
        const long idx[3] = {ix, iy, iz};
        for (int i = 0; i < 3; ++i) {
            const double w = extent[i] / n[i];
            const double center = region.lo[i] + (idx[i] + 0.5) * w;
            const double jitter = (extent[i] > 0.0) ? rng.uniform(-0.5, 0.5) * w : 0.0;
            p[i] = center + jitter;
        }
        samples.push_back({synth_channel(scene, paths_from_position(scene, p)), p});
    }
    return samples;
}

std::vector<ChannelSample> gen_trajectory(const SceneConfig& scene, const AxisBox& region,
                                          const Vec3& start, const Vec3& velocity, int length,
                                          double dt) {
    if (length < 1) {
        throw std::invalid_argument("gen_trajectory: length must be >= 1");
    }
    std::vector<ChannelSample> samples;
    samples.reserve(static_cast<std::size_t>(length));
    for (int t = 0; t < length; ++t) {
        const Vec3 p = start + (t * dt) * velocity;
        if (!region.contains(p)) {
            throw std::invalid_argument("gen_trajectory: position leaves the region at step " +
                                        std::to_string(t));
        }
        samples.push_back({synth_channel(scene, paths_from_position(scene, p)), p});
    }
    return samples;
}

}  // namespace chanest
