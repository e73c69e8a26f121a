#include "chanest/channel.hpp"

#include <gtest/gtest.h>

#include <Eigen/SVD>
#include <filesystem>
#include <fstream>

#include "chanest/dataset_io.hpp"
#include "chanest/errors.hpp"
#include "chanest/rng.hpp"

using namespace chanest;

namespace {

SceneConfig small_scene() {
    SceneConfig scene;
    scene.bs_geometry = {4, 4, 0.5};
    scene.ue_geometry = {2, 2, 0.5};
    scene.bs_position = Vec3(0.0, 0.0, 10.0);
    scene.num_paths = 3;
    scene.scatterer_positions = {Vec3(15.0, 8.0, 5.0), Vec3(18.0, -6.0, 3.0),
                                 Vec3(25.0, 4.0, 6.0)};
    scene.carrier_hz = 3.5e9;
    scene.rng_seed = 5;
    return scene;
}

AxisBox region_box() {
    return {Vec3(20.0, -10.0, 1.5), Vec3(40.0, 10.0, 1.5)};
}

double path_distance(const PathParam& a, const PathParam& b) {
    return std::abs(a.gain - b.gain) + std::abs(a.aoa_az - b.aoa_az) +
           std::abs(a.aoa_el - b.aoa_el) + std::abs(a.aod_az - b.aod_az) +
           std::abs(a.aod_el - b.aod_el);
}

}  // namespace

TEST(Steering, BroadsideIsAllOnes) {
    const ArrayGeometry geom{3, 4, 0.5};
    const ComplexVector a = steering(geom, 0.0, 0.0);
    ASSERT_EQ(a.size(), 12);
    for (Eigen::Index i = 0; i < a.size(); ++i) {
        EXPECT_NEAR(std::abs(a(i) - std::complex<double>(1.0)), 0.0, 1e-15);
    }
}

TEST(Steering, SingleElement) {
    const ComplexVector a = steering({1, 1, 0.5}, 0.7, -0.3);
    ASSERT_EQ(a.size(), 1);
    EXPECT_NEAR(std::abs(a(0) - std::complex<double>(1.0)), 0.0, 1e-15);
}

TEST(Steering, TwoElementEndfire) {
    // spacing 0.5, azimuth pi/2, elevation 0: phases 0 and pi
    const ComplexVector a = steering({2, 1, 0.5}, M_PI / 2.0, 0.0);
    ASSERT_EQ(a.size(), 2);
    EXPECT_NEAR(std::abs(a(0) - std::complex<double>(1.0)), 0.0, 1e-12);
    EXPECT_NEAR(std::abs(a(1) - std::complex<double>(-1.0)), 0.0, 1e-12);
}

TEST(Steering, UnitModulusAndNorm) {
    const ArrayGeometry geom{5, 3, 0.5};
    Rng rng(31);
    for (int trial = 0; trial < 20; ++trial) {
        const double az = rng.uniform(-M_PI, M_PI);
        const double el = rng.uniform(-M_PI / 2.0, M_PI / 2.0);
        const ComplexVector a = steering(geom, az, el);
        for (Eigen::Index i = 0; i < a.size(); ++i) {
            EXPECT_NEAR(std::abs(a(i)), 1.0, 1e-14);
        }
        EXPECT_NEAR(a.squaredNorm(), static_cast<double>(geom.num_antennas()), 1e-10);
    }
}

TEST(SynthChannel, SingleBroadsidePath) {
    SceneConfig scene = small_scene();
    std::vector<PathParam> paths(1);
    paths[0].gain = 1.0;
    const ComplexMatrix h = synth_channel(scene, paths);
    const double scale = std::sqrt(16.0 * 4.0);
    for (Eigen::Index j = 0; j < h.cols(); ++j)
        for (Eigen::Index i = 0; i < h.rows(); ++i)
            EXPECT_NEAR(std::abs(h(i, j) - std::complex<double>(scale)), 0.0, 1e-12);
}

TEST(SynthChannel, EmptyPathsThrows) {
    EXPECT_THROW(synth_channel(small_scene(), {}), std::invalid_argument);
}

TEST(SynthChannel, RankBoundedByPathCount) {
    SceneConfig scene = small_scene();
    Rng rng(37);
    for (int num_paths : {1, 2, 3}) {
        std::vector<PathParam> paths;
        for (int l = 0; l < num_paths; ++l) {
            PathParam p;
            p.gain = std::complex<double>(rng.normal(), rng.normal());
            p.aoa_az = rng.uniform(-1.0, 1.0);
            p.aoa_el = rng.uniform(-0.5, 0.5);
            p.aod_az = rng.uniform(-1.0, 1.0);
            p.aod_el = rng.uniform(-0.5, 0.5);
            paths.push_back(p);
        }
        const ComplexMatrix h = synth_channel(scene, paths);
        Eigen::JacobiSVD<ComplexMatrix> svd(h);
        const auto& sv = svd.singularValues();
        for (Eigen::Index i = num_paths; i < sv.size(); ++i) {
            EXPECT_LT(sv(i), 1e-10 * sv(0));
        }
    }
}

TEST(SynthChannel, FrobeniusNormForSinglePath) {
    SceneConfig scene = small_scene();
    std::vector<PathParam> paths(1);
    paths[0].gain = {0.3, -0.4};  // |gain| = 0.5
    paths[0].aoa_az = 0.4;
    paths[0].aoa_el = -0.2;
    paths[0].aod_az = -0.9;
    paths[0].aod_el = 0.1;
    const ComplexMatrix h = synth_channel(scene, paths);
    // ||H||_F^2 = N_B * N_U * |gain|^2 for unit-modulus steering entries
    EXPECT_NEAR(h.squaredNorm(), 16.0 * 4.0 * 0.25, 1e-9);
}

TEST(SynthChannel, LinearInPathGain) {
    SceneConfig scene = small_scene();
    std::vector<PathParam> one(1), two(1);
    one[0].gain = {0.7, 0.1};
    one[0].aoa_az = 0.3;
    two[0] = one[0];
    two[0].gain *= 2.0;
    const ComplexMatrix h1 = synth_channel(scene, one);
    const ComplexMatrix h2 = synth_channel(scene, two);
    EXPECT_LT((h2 - 2.0 * h1).norm(), 1e-12 * h1.norm());
}

TEST(PathsFromPosition, BroadsideLosAngles) {
    SceneConfig scene = small_scene();
    scene.num_paths = 1;
    // directly on the array broadside axis (+x from the BS)
    const Vec3 p = scene.bs_position + Vec3(30.0, 0.0, 0.0);
    const auto paths = paths_from_position(scene, p);
    ASSERT_EQ(paths.size(), 1u);
    EXPECT_NEAR(paths[0].aoa_az, 0.0, 1e-12);
    EXPECT_NEAR(paths[0].aoa_el, 0.0, 1e-12);
    EXPECT_NEAR(paths[0].aod_az, 0.0, 1e-12);
    EXPECT_NEAR(paths[0].aod_el, 0.0, 1e-12);
}

TEST(PathsFromPosition, GainHalvesAtDoubleDistance) {
    SceneConfig scene = small_scene();
    scene.num_paths = 1;  // LoS only
    const Vec3 dir(0.8, 0.6, 0.0);
    const auto near_paths = paths_from_position(scene, scene.bs_position + 10.0 * dir);
    const auto far_paths = paths_from_position(scene, scene.bs_position + 20.0 * dir);
    EXPECT_NEAR(std::abs(far_paths[0].gain) / std::abs(near_paths[0].gain), 0.5, 1e-12);
}

TEST(PathsFromPosition, ContinuousInPosition) {
    SceneConfig scene = small_scene();
    const Vec3 p(27.0, 3.0, 1.5);
    const auto base = paths_from_position(scene, p);
    const double delta = 1e-4;
    for (const Vec3& step : {Vec3(delta, 0, 0), Vec3(0, delta, 0), Vec3(0, 0, delta)}) {
        const auto moved = paths_from_position(scene, p + step);
        ASSERT_EQ(moved.size(), base.size());
        for (std::size_t l = 0; l < base.size(); ++l) {
            EXPECT_LT(path_distance(moved[l], base[l]), 1e-1 * delta / 1e-4);
        }
    }
}

TEST(PathsFromPosition, CoincidentPositionThrows) {
    SceneConfig scene = small_scene();
    EXPECT_THROW(paths_from_position(scene, scene.bs_position), std::invalid_argument);
    EXPECT_THROW(paths_from_position(scene, scene.scatterer_positions[0]),
                 std::invalid_argument);
}

TEST(GenDataset, SingleSampleAtCenter) {
    const auto samples = gen_dataset(small_scene(), region_box(), 1);
    ASSERT_EQ(samples.size(), 1u);
    EXPECT_TRUE(samples[0].position.isApprox(region_box().center()));
}

TEST(GenDataset, SameSeedSameDataset) {
    const auto a = gen_dataset(small_scene(), region_box(), 64);
    const auto b = gen_dataset(small_scene(), region_box(), 64);
    ASSERT_EQ(a.size(), b.size());
    for (std::size_t k = 0; k < a.size(); ++k) {
        EXPECT_TRUE(a[k].position == b[k].position);
        EXPECT_TRUE(a[k].H == b[k].H);
    }
}

TEST(GenDataset, PaperCardinalityFixture) {
    // the default-scale dataset used by the full configuration
    const auto samples = gen_dataset(small_scene(), region_box(), 1111);
    EXPECT_EQ(samples.size(), 1111u);
    for (const auto& s : samples) {
        EXPECT_TRUE(region_box().contains(s.position));
    }
}

TEST(GenDataset, DegenerateRegionThrows) {
    AxisBox point{Vec3(25, 0, 1.5), Vec3(25, 0, 1.5)};
    EXPECT_THROW(gen_dataset(small_scene(), point, 10), std::invalid_argument);
    AxisBox inverted{Vec3(25, 0, 1.5), Vec3(24, 0, 1.5)};
    EXPECT_THROW(gen_dataset(small_scene(), inverted, 10), std::invalid_argument);
}

TEST(GenTrajectory, ZeroVelocityRepeatsSample) {
    const auto traj =
        gen_trajectory(small_scene(), region_box(), Vec3(25, 0, 1.5), Vec3::Zero(), 5, 1.0);
    ASSERT_EQ(traj.size(), 5u);
    for (const auto& s : traj) {
        EXPECT_TRUE(s.position == traj[0].position);
        EXPECT_TRUE(s.H == traj[0].H);
    }
}

TEST(GenTrajectory, DefaultHorizonFixture) {
    const auto traj = gen_trajectory(small_scene(), region_box(), Vec3(22, -8, 1.5),
                                     Vec3(0.10, 0.12, 0.0), 100, 1.0);
    EXPECT_EQ(traj.size(), 100u);
}

TEST(GenTrajectory, ConstantStepLength) {
    const Vec3 v(0.3, -0.1, 0.0);
    const auto traj =
        gen_trajectory(small_scene(), region_box(), Vec3(25, 5, 1.5), v, 20, 0.5);
    for (std::size_t t = 1; t < traj.size(); ++t) {
        EXPECT_NEAR((traj[t].position - traj[t - 1].position).norm(), v.norm() * 0.5, 1e-12);
    }
}

TEST(GenTrajectory, LeavingRegionThrows) {
    EXPECT_THROW(gen_trajectory(small_scene(), region_box(), Vec3(39, 9, 1.5),
                                Vec3(1.0, 1.0, 0.0), 10, 1.0),
                 std::invalid_argument);
}

TEST(GenTrajectory, StepHalvesWithDt) {
    // first-order spatial continuity: halving dt halves the channel change
    SceneConfig scene = small_scene();
    const Vec3 start(26.0, 2.0, 1.5);
    const Vec3 v(1e-4, 5e-5, 0.0);
    const auto coarse = gen_trajectory(scene, region_box(), start, v, 2, 1.0);
    const auto fine = gen_trajectory(scene, region_box(), start, v, 2, 0.5);
    const double d_coarse = (coarse[1].H - coarse[0].H).norm() / coarse[0].H.norm();
    const double d_fine = (fine[1].H - fine[0].H).norm() / fine[0].H.norm();
    EXPECT_NEAR(d_fine / d_coarse, 0.5, 0.05);
}

TEST(DatasetIo, RoundTripExact) {
    const auto samples = gen_dataset(small_scene(), region_box(), 17);
    const auto path = std::filesystem::temp_directory_path() / "chanest_ds_roundtrip.bin";
    save_dataset(path, samples, 3.5e9);
    DatasetHeader header;
    const auto loaded = load_dataset(path, &header);
    EXPECT_EQ(header.n_bs, 16u);
    EXPECT_EQ(header.n_ue, 4u);
    EXPECT_EQ(header.count, 17u);
    EXPECT_EQ(header.carrier_hz, 3.5e9);
    ASSERT_EQ(loaded.size(), samples.size());
    for (std::size_t k = 0; k < samples.size(); ++k) {
        EXPECT_TRUE(loaded[k].position == samples[k].position);
        EXPECT_TRUE(loaded[k].H == samples[k].H);
    }
    std::filesystem::remove(path);
}

TEST(DatasetIo, FileSizeMatchesFormat) {
    const auto samples = gen_dataset(small_scene(), region_box(), 9);
    const auto path = std::filesystem::temp_directory_path() / "chanest_ds_size.bin";
    save_dataset(path, samples, 3.5e9);
    const auto size = std::filesystem::file_size(path);
    EXPECT_EQ(size, 40u + 9u * (24u + 16u * 16u * 4u));
    std::filesystem::remove(path);
}

TEST(DatasetIo, BadMagicThrows) {
    const auto path = std::filesystem::temp_directory_path() / "chanest_ds_magic.bin";
    {
        std::ofstream out(path, std::ios::binary);
        out << "NOPE" << std::string(64, '\0');
    }
    EXPECT_THROW(load_dataset(path), FormatError);
    std::filesystem::remove(path);
}

TEST(DatasetIo, TruncatedPayloadReportsOffset) {
    const auto samples = gen_dataset(small_scene(), region_box(), 4);
    const auto path = std::filesystem::temp_directory_path() / "chanest_ds_trunc.bin";
    save_dataset(path, samples, 3.5e9);
    std::filesystem::resize_file(path, std::filesystem::file_size(path) - 13);
    try {
        load_dataset(path);
        FAIL() << "expected FormatError";
    } catch (const FormatError& e) {
        EXPECT_GT(e.byte_offset(), 40u);
    }
    std::filesystem::remove(path);
}
