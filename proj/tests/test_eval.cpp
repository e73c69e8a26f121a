#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "chanest/errors.hpp"
#include "chanest/eval/config.hpp"
#include "chanest/eval/experiments.hpp"
#include "chanest/eval/metrics.hpp"
#include "chanest/eval/reference_curves.hpp"

using namespace chanest;
namespace fs = std::filesystem;

namespace {

std::string first_line(const fs::path& path) {
    std::ifstream in(path);
    std::string line;
    std::getline(in, line);
    return line;
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

int run_cli(const std::string& args) {
    const std::string cmd = std::string(CHANEST_CLI_PATH) + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}

fs::path config_dir() { return fs::path(CHANEST_CONFIG_DIR); }

fs::path temp_dir(const std::string& tag) {
    const fs::path dir = fs::temp_directory_path() / ("chanest_eval_" + tag);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

}  // namespace

TEST(NmseDb, PerfectEstimateClampsToFloor) {
    ComplexMatrix h(2, 2);
    h << 1.0, 2.0, 3.0, 4.0;
    EXPECT_EQ(eval::nmse_db(h, h), -300.0);
}

TEST(NmseDb, ZeroEstimateIsZeroDb) {
    ComplexMatrix h(2, 2);
    h << 1.0, 2.0, 3.0, 4.0;
    EXPECT_NEAR(eval::nmse_db(ComplexMatrix::Zero(2, 2), h), 0.0, 1e-12);
}

TEST(NmseDb, DoubledEstimateIsZeroDb) {
    ComplexMatrix h(2, 2);
    h << 1.0, 2.0, 3.0, 4.0;
    EXPECT_NEAR(eval::nmse_db(ComplexMatrix(2.0 * h), h), 0.0, 1e-12);
}

TEST(NmseDb, ZeroTruthThrows) {
    EXPECT_THROW(eval::nmse_db(ComplexMatrix::Zero(2, 2), ComplexMatrix::Zero(2, 2)),
                 std::invalid_argument);
}

TEST(Spearman, MonotoneSeriesIsOne) {
    RealVector t(5), d(5);
    t << 0, 1, 2, 3, 4;
    d << 0.1, 0.5, 0.7, 2.0, 9.0;
    EXPECT_NEAR(eval::spearman(t, d), 1.0, 1e-12);
    RealVector rev = d.reverse();
    EXPECT_NEAR(eval::spearman(t, rev), -1.0, 1e-12);
}

TEST(Spearman, HandlesTies) {
    RealVector x(4), y(4);
    x << 1, 1, 2, 3;
    y << 2, 2, 4, 6;
    EXPECT_NEAR(eval::spearman(x, y), 1.0, 1e-12);
}

TEST(Config, LoadsBundledSmallConfig) {
    const eval::ExperimentConfig cfg = eval::load_config(config_dir() / "small.json");
    EXPECT_EQ(cfg.n_bs(), 4);
    EXPECT_EQ(cfg.n_ue(), 2);
    EXPECT_EQ(cfg.overhead(), 6);
    EXPECT_EQ(cfg.autoencoder.latent_dim, 4);
}

TEST(Config, LoadsFullScaleFixture) {
    // the bundled full-scale configuration: 100x4 antennas, overhead 96,
    // latent 64, encoder [1280, 256], decoder [256, 1280], LSTM 3x64,
    // distance-loss weight 0.1
    const eval::ExperimentConfig cfg = eval::load_config(config_dir() / "paper.json");
    EXPECT_EQ(cfg.n_bs(), 100);
    EXPECT_EQ(cfg.n_ue(), 4);
    EXPECT_EQ(cfg.overhead(), 96);
    EXPECT_EQ(cfg.num_samples, 1111);
    EXPECT_EQ(cfg.autoencoder.latent_dim, 64);
    EXPECT_EQ(cfg.autoencoder.encoder_hidden, (std::vector<int>{1280, 256}));
    EXPECT_EQ(cfg.autoencoder.decoder_hidden, (std::vector<int>{256, 1280}));
    EXPECT_NEAR(cfg.autoencoder.lambda_tc, 0.1, 1e-15);
    EXPECT_EQ(cfg.tracker.lstm_hidden, 64);
    EXPECT_EQ(cfg.tracker.lstm_layers, 3);
    EXPECT_EQ(cfg.trajectory.length, 100);
}

TEST(Config, RoundTripsThroughJson) {
    const eval::ExperimentConfig cfg = eval::load_config(config_dir() / "small.json");
    const eval::ExperimentConfig back = eval::config_from_json_text(eval::config_to_json_text(cfg));
    EXPECT_EQ(back.n_bs(), cfg.n_bs());
    EXPECT_EQ(back.num_samples, cfg.num_samples);
    EXPECT_EQ(back.tracker.noise_seed, cfg.tracker.noise_seed);
    EXPECT_EQ(back.scene.scatterer_positions.size(), cfg.scene.scatterer_positions.size());
    EXPECT_EQ(eval::config_to_json_text(back), eval::config_to_json_text(cfg));
}

TEST(Config, MalformedJsonThrowsFormatError) {
    EXPECT_THROW(eval::config_from_json_text("{ not json"), FormatError);
    EXPECT_THROW(eval::config_from_json_text(R"({"pilots": {"m_bs": 0}})"), FormatError);
}

TEST(Config, MissingDatasetPathThrows) {
    EXPECT_THROW(
        eval::config_from_json_text(R"({"dataset": {"path": "/nonexistent/data.bin"}})"),
        FormatError);
}

TEST(ReferenceCurves, MatchPublishedSamples) {
    const auto abl = eval::reference::ablation_curves();
    ASSERT_EQ(abl.dist_tc.size(), 101u);
    ASSERT_EQ(abl.dist_no_tc.size(), 101u);
    EXPECT_EQ(abl.dist_tc[0], 0.0);
    EXPECT_NEAR(abl.dist_tc[1], 0.0699, 1e-9);
    EXPECT_NEAR(abl.dist_tc[100], 1.0, 1e-12);
    EXPECT_NEAR(abl.dist_no_tc[6], 0.9531, 1e-9);

    const auto c10 = eval::reference::nmse_curves_10x10();
    ASSERT_EQ(c10.nmse_ls.size(), 100u);
    EXPECT_NEAR(c10.nmse_ls[0], -0.000617, 1e-9);
    EXPECT_NEAR(c10.nmse_tc[0], -7.563859, 1e-9);
    EXPECT_NEAR(c10.nmse_tc[56], -10.629262, 1e-9);
    EXPECT_NEAR(c10.nmse_notc[0], 2.222193, 1e-9);

    const auto c20 = eval::reference::nmse_curves_20x20();
    ASSERT_EQ(c20.nmse_tc.size(), 100u);
    EXPECT_NEAR(c20.nmse_tc[80], -10.189881, 1e-9);
}

TEST(Reports, CsvHeadersAreStable) {
    const fs::path dir = temp_dir("csv");
    eval::AblationResult abl;
    abl.dist_no_tc = {0.0, 0.5};
    abl.dist_tc = {0.0, 0.2};
    eval::write_ablation_csv(dir / "ablation.csv", abl);
    EXPECT_EQ(first_line(dir / "ablation.csv"), "t,dist_no_tc,dist_tc");

    eval::ComparisonResult cmp;
    cmp.nmse_ls = {0.1};
    cmp.nmse_tc = {-3.0};
    cmp.nmse_notc = {1.0};
    cmp.nmse_direct = {-2.0};
    eval::write_comparison_csv(dir / "comparison.csv", cmp);
    EXPECT_EQ(first_line(dir / "comparison.csv"), "t,nmse_ls,nmse_tc,nmse_notc,nmse_direct");

    eval::write_ls_csv(dir / "ls.csv", {0.0, -1.0});
    EXPECT_EQ(first_line(dir / "ls.csv"), "t,nmse_ls");

    eval::write_reference_csvs(dir);
    EXPECT_TRUE(fs::exists(dir / "reference_ablation.csv"));
    EXPECT_TRUE(fs::exists(dir / "reference_comparison_10x10.csv"));
    EXPECT_TRUE(fs::exists(dir / "reference_comparison_20x20.csv"));
    fs::remove_all(dir);
}

TEST(Reports, ManifestCapturesConfigAndVersion) {
    const fs::path dir = temp_dir("manifest");
    const eval::ExperimentConfig cfg = eval::load_config(config_dir() / "small.json");
    eval::write_manifest(dir / "manifest.json", cfg, "unit-test");
    const std::string text = slurp(dir / "manifest.json");
    EXPECT_NE(text.find("unit-test"), std::string::npos);
    EXPECT_NE(text.find(eval::version_string()), std::string::npos);
    EXPECT_NE(text.find("small-smoke"), std::string::npos);
    fs::remove_all(dir);
}

TEST(GradientSuite, AllLossesBelowTolerance) {
    const eval::GradientSuiteResult r = eval::run_gradient_suite();
    EXPECT_LT(r.mlp, 1e-4);
    EXPECT_LT(r.lstm, 1e-4);
    EXPECT_LT(r.loss_ci, 1e-4);
    EXPECT_LT(r.loss_tc, 1e-4);
    EXPECT_LT(r.loss_lstm, 1e-4);
}

TEST(Experiments, LsEvalOnSmallConfig) {
    eval::ExperimentConfig cfg = eval::load_config(config_dir() / "small.json");
    const std::vector<double> nmse = eval::run_ls_eval(cfg);
    ASSERT_EQ(nmse.size(), 8u);
    for (double v : nmse) {
        EXPECT_TRUE(std::isfinite(v));
        EXPECT_LT(v, 10.0);
    }
}

TEST(Experiments, TrainingTrajectoriesStayInRegion) {
    const eval::ExperimentConfig cfg = eval::load_config(config_dir() / "small.json");
    const auto trajectories = eval::make_training_trajectories(cfg, 5, 123);
    ASSERT_EQ(trajectories.size(), 5u);
    for (const auto& traj : trajectories) {
        ASSERT_EQ(traj.size(), static_cast<std::size_t>(cfg.trajectory.length));
        for (const auto& s : traj) {
            EXPECT_TRUE(cfg.region.contains(s.position));
        }
    }
    // deterministic per seed
    const auto again = eval::make_training_trajectories(cfg, 5, 123);
    EXPECT_TRUE(again[2][3].position == trajectories[2][3].position);
}

TEST(Cli, MissingConfigIsUsageError) {
    EXPECT_EQ(run_cli("run-comparison"), 1);
}

TEST(Cli, UnknownSubcommandIsUsageError) {
    EXPECT_EQ(run_cli("frobnicate"), 1);
}

TEST(Cli, MalformedConfigIsDataError) {
    const fs::path dir = temp_dir("badcfg");
    std::ofstream(dir / "bad.json") << "{ nope";
    EXPECT_EQ(run_cli("eval-ls --config " + (dir / "bad.json").string() + " --out " +
                      (dir / "out").string()),
              2);
    fs::remove_all(dir);
}

TEST(Cli, SmokePipelineCompletes) {
    const fs::path dir = temp_dir("pipeline");
    const std::string cfg = (config_dir() / "small.json").string();
    const std::string out = (dir / "out").string();
    EXPECT_EQ(run_cli("gen-data --config " + cfg + " --out " + out), 0);
    EXPECT_TRUE(fs::exists(dir / "out" / "dataset.bin"));
    EXPECT_EQ(run_cli("train-ae --config " + cfg + " --out " + out), 0);
    EXPECT_TRUE(fs::exists(dir / "out" / "ae.ckpt"));
    EXPECT_TRUE(fs::exists(dir / "out" / "ae.ckpt.json"));
    EXPECT_EQ(run_cli("train-tracker --config " + cfg + " --out " + out), 0);
    EXPECT_TRUE(fs::exists(dir / "out" / "tracker.ckpt"));
    EXPECT_EQ(run_cli("run-comparison --config " + cfg + " --out " + out), 0);
    EXPECT_TRUE(fs::exists(dir / "out" / "comparison.csv"));
    EXPECT_TRUE(fs::exists(dir / "out" / "run-comparison_manifest.json"));
    EXPECT_EQ(first_line(dir / "out" / "comparison.csv"),
              "t,nmse_ls,nmse_tc,nmse_notc,nmse_direct");
    fs::remove_all(dir);
}

TEST(Cli, GradCheckSubcommandPasses) {
    EXPECT_EQ(run_cli("grad-check"), 0);
}
