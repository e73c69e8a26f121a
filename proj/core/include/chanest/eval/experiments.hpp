#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "chanest/eval/config.hpp"
#include "chanest/eval/metrics.hpp"

namespace chanest::eval {

/// Dataset for the configured scene: generated (seeded jittered grid) or
/// loaded from cfg.dataset_path when that is set.
std::vector<ChannelSample> make_dataset(const ExperimentConfig& cfg);

/// The configured evaluation trajectory (length tracked intervals).
std::vector<ChannelSample> make_eval_trajectory(const ExperimentConfig& cfg);

/// Random in-region linear trajectories for sequence training. Starts and
/// headings are drawn from `seed`; the speed matches the evaluation
/// trajectory. Deterministic per seed.
std::vector<std::vector<ChannelSample>> make_training_trajectories(const ExperimentConfig& cfg,
                                                                   int count,
                                                                   std::uint64_t seed);

struct AblationResult {
    std::vector<double> dist_no_tc;  // normalized latent distance, t = 0..T-1
    std::vector<double> dist_tc;
    double spearman_no_tc = 0.0;  // rank correlation of d(t) with t
    double spearman_tc = 0.0;
};

/// Trains one autoencoder without and one with the distance loss (same
/// seed, same data) and evaluates latent smoothness on the eval trajectory.
AblationResult run_ablation(const ExperimentConfig& cfg);

struct ComparisonResult {
    std::vector<double> nmse_ls;      // per step, dB
    std::vector<double> nmse_tc;      // latent tracking, distance-loss autoencoder
    std::vector<double> nmse_notc;    // latent tracking, reconstruction-only autoencoder
    std::vector<double> nmse_direct;  // end-to-end baseline (empty when disabled)
    std::size_t tracker_params = 0;
    std::size_t direct_params = 0;
    std::uint64_t decoder_checksum_before = 0;  // frozen-decoder accounting
    std::uint64_t decoder_checksum_after = 0;
};

/// Full pipeline on one evaluation trajectory: independent minimum-norm LS
/// per interval vs latent tracking (with and without the distance loss) vs
/// the optional direct end-to-end baseline.
ComparisonResult run_comparison(const ExperimentConfig& cfg);

/// LS baseline alone (no training).
std::vector<double> run_ls_eval(const ExperimentConfig& cfg);

struct ScalingResult {
    int n_bs_base = 0;
    int n_bs_scaled = 0;
    ComparisonResult base;
    ComparisonResult scaled;
};

/// run_comparison at the configured BS size and at double the BS rows/cols
/// (4x the antennas), everything else fixed. The latent tracker's parameter
/// count must not change; the direct baseline's grows with the array.
ScalingResult run_scaling(const ExperimentConfig& cfg);

// --- report emission --------------------------------------------------------

void write_ablation_csv(const std::filesystem::path& path, const AblationResult& r);
void write_comparison_csv(const std::filesystem::path& path, const ComparisonResult& r);
void write_ls_csv(const std::filesystem::path& path, const std::vector<double>& nmse);
void write_scaling_reports(const std::filesystem::path& out_dir, const ScalingResult& r);

/// Reference curves from the full-scale study, for plotting alongside runs.
void write_reference_csvs(const std::filesystem::path& out_dir);

/// JSON manifest capturing the resolved config, tool version, and the
/// command that produced a run.
void write_manifest(const std::filesystem::path& path, const ExperimentConfig& cfg,
                    const std::string& command);

std::string version_string();

// --- gradient verification ---------------------------------------------------

/// Max relative finite-difference error for every loss the project trains
/// on, at toy dimensions. All entries must come in below 1e-4.
struct GradientSuiteResult {
    double mlp = 0.0;
    double lstm = 0.0;       // T = 5 BPTT
    double loss_ci = 0.0;
    double loss_tc = 0.0;    // batch of 8
    double loss_lstm = 0.0;  // T = 5
    double worst() const;
};

GradientSuiteResult run_gradient_suite(std::uint64_t seed = 12345);

}  // namespace chanest::eval
