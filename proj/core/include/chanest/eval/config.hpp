#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include "chanest/autoencoder.hpp"
#include "chanest/channel.hpp"
#include "chanest/tracker.hpp"

namespace chanest::eval {

struct TrajectorySpec {
    Vec3 start = Vec3::Zero();
    Vec3 velocity = Vec3::Zero();
    double dt = 1.0;   // seconds per coherence interval
    int length = 100;  // tracked intervals
};

struct PilotSpec {
    int m_bs = 24;
    int m_ue = 4;
    double amplitude = 1.0;
    std::uint64_t seed = 7;
};

struct DirectSpec {
    bool enabled = true;
    int lstm_layers = 3;
    int head_hidden = 128;
    int min_hidden = 64;
    double learning_rate = 1e-3;
    int epochs = 80;
    int seq_batch = 16;
    std::uint64_t seed = 51;
};

struct TrackerSpec {
    TrackerHyper hyper;
    int lstm_hidden = 64;
    int lstm_layers = 3;
    int head_hidden = 128;
    int num_train_sequences = 64;
    std::uint64_t trajectory_seed = 97;
    std::uint64_t noise_seed = 41;
};

/// Everything one experiment needs; serializable to/from JSON.
struct ExperimentConfig {
    std::string name = "experiment";

    SceneConfig scene;
    AxisBox region;
    int num_samples = 1000;
    std::optional<std::string> dataset_path;  // load instead of generating when set

    TrajectorySpec trajectory;
    PilotSpec pilots;
    double snr_db = 20.0;
    std::uint64_t eval_noise_seed = 61;

    AeHyper autoencoder;
    TrackerSpec tracker;
    DirectSpec direct;

    int n_bs() const { return scene.bs_geometry.num_antennas(); }
    int n_ue() const { return scene.ue_geometry.num_antennas(); }
    int overhead() const { return pilots.m_bs * pilots.m_ue; }
};

/// Parses a config file, applying defaults for absent fields.
/// Throws FormatError on unreadable or invalid input (including a
/// dataset_path that does not exist).
ExperimentConfig load_config(const std::filesystem::path& path);

ExperimentConfig config_from_json_text(const std::string& text);

/// Fully-resolved JSON (every field explicit), as written into run manifests.
std::string config_to_json_text(const ExperimentConfig& cfg);

void save_config(const std::filesystem::path& path, const ExperimentConfig& cfg);

}  // namespace chanest::eval
