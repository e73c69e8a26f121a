#pragma once

#include <cstdint>
#include <filesystem>
#include <utility>
#include <vector>

#include "chanest/autoencoder.hpp"
#include "chanest/nn/lstm.hpp"
#include "chanest/nn/mlp.hpp"
#include "chanest/signaling.hpp"

namespace chanest {

/// Latent-state tracker: an input head feeding a stacked LSTM, with two
/// output heads reading the hidden state (latent estimate, and the pair of
/// amplitude-normalization scalars). No dimension in here depends on the
/// antenna counts; only the observation length and latent size enter.
struct TrackerModel {
    nn::Mlp g1;          // obs_dim -> lstm input
    nn::LstmStack lstm;
    nn::Mlp g2;          // hidden -> latent_dim
    nn::Mlp g3;          // hidden -> 2, outputs (alpha_hat, beta_hat)

    std::size_t param_count() const {
        return g1.param_count() + lstm.param_count() + g2.param_count() + g3.param_count();
    }
};

struct TrackerGrads {
    nn::Mlp g1;
    nn::LstmStack lstm;
    nn::Mlp g2;
    nn::Mlp g3;
};

struct TrackerDims {
    int obs_dim = 0;      // 2*M_B*M_U
    int latent_dim = 0;
    int lstm_hidden = 64;
    int lstm_layers = 3;
    int head_hidden = 128;
};

TrackerModel make_tracker(const TrackerDims& dims, Rng& rng);
TrackerGrads zero_grads(const TrackerModel& model);
std::vector<nn::TensorView> param_views(TrackerModel& m);
std::vector<nn::TensorView> param_views(TrackerGrads& g);

/// One supervised tracking sequence: flattened observations and the
/// frozen-encoder targets per coherence interval.
struct TrainingSequence {
    RealMatrix observations;  // obs_dim x T
    RealMatrix latents;       // latent_dim x T
    RealVector alphas;        // T
    RealVector betas;         // T

    Eigen::Index length() const { return observations.cols(); }
};

/// Observations and targets for the leading T steps of each trajectory.
/// Noise is drawn independently per observation from the spec's seed.
std::vector<TrainingSequence> build_sequences(
    const std::vector<std::vector<ChannelSample>>& trajectories, const nn::Mlp& encoder,
    const PilotConfig& pilots, const NoiseSpec& noise, int sequence_length);

struct TrackerOutput {
    RealMatrix latents;  // latent_dim x T
    RealVector alphas;   // T
    RealVector betas;    // T
};

/// Causal forward pass from a zero LSTM state: outputs at step t depend
/// only on observations 0..t.
TrackerOutput tracker_forward(const TrackerModel& model, const RealMatrix& observations);

struct TrackerHyper {
    double lambda_alpha = 0.1;
    double lambda_beta = 0.1;
    double learning_rate = 1e-3;
    int epochs = 100;
    int seq_batch = 16;
    std::uint64_t seed = 0;
};

/// (1/T) sum_t ( ||s - s_hat||^2 + lambda_a (a - a_hat)^2 + lambda_b (b - b_hat)^2 ),
/// averaged over the batch; exact gradients via backpropagation through time.
double loss_lstm(const TrackerModel& model, const std::vector<const TrainingSequence*>& batch,
                 const TrackerHyper& hyper, TrackerGrads* grads);
double loss_lstm(const TrackerModel& model, const TrainingSequence& seq,
                 const TrackerHyper& hyper, TrackerGrads* grads);

struct TrackerTrainRecord {
    std::vector<double> epoch_loss;
    int epochs_run = 0;
};

/// Adam on the sequence loss over shuffled sequence minibatches. Only the
/// tracker's own parameters are updated; the autoencoder never enters.
TrackerModel train_tracker(const std::vector<TrainingSequence>& sequences, TrackerModel model,
                           const TrackerHyper& hyper, TrackerTrainRecord* record = nullptr);

/// Full channel estimates: tracker outputs pushed through the frozen
/// decoder and the postprocessing map. Returns one N_B x N_U matrix per step.
std::vector<ComplexMatrix> infer_channels(const TrackerModel& model, const nn::Mlp& decoder,
                                          const RealMatrix& observations, Eigen::Index n_bs,
                                          Eigen::Index n_ue);

// --- Direct end-to-end baseline -------------------------------------------
//
// A single network mapping observations straight to the flattened channel
// (no pretrained latent). Its LSTM hidden width scales with the output size,
// so its parameter count grows with the array while the latent tracker's
// does not.

struct DirectModel {
    nn::Mlp g1;
    nn::LstmStack lstm;
    nn::Mlp head;         // hidden -> 2*N_B*N_U
    double target_scale = 1.0;  // std of the flattened-channel training targets

    std::size_t param_count() const {
        return g1.param_count() + lstm.param_count() + head.param_count();
    }
};

struct DirectDims {
    int obs_dim = 0;
    int out_dim = 0;  // 2*N_B*N_U
    int lstm_layers = 3;
    int head_hidden = 128;
    int min_hidden = 64;

    int hidden() const { return std::max(min_hidden, out_dim / 8); }
};

DirectModel make_direct(const DirectDims& dims, Rng& rng);

struct DirectSequence {
    RealMatrix observations;  // obs_dim x T
    RealMatrix channels;      // out_dim x T, flattened [Re; Im] targets
};

std::vector<DirectSequence> build_direct_sequences(
    const std::vector<std::vector<ChannelSample>>& trajectories, const PilotConfig& pilots,
    const NoiseSpec& noise, int sequence_length);

struct DirectHyper {
    double learning_rate = 1e-3;
    int epochs = 100;
    int seq_batch = 16;
    std::uint64_t seed = 0;
};

DirectModel train_direct(const std::vector<DirectSequence>& sequences, DirectModel model,
                         const DirectHyper& hyper, TrackerTrainRecord* record = nullptr);

std::vector<ComplexMatrix> infer_direct(const DirectModel& model, const RealMatrix& observations,
                                        Eigen::Index n_bs, Eigen::Index n_ue);

/// Sidecar fields stored alongside a tracker checkpoint.
struct TrackerSidecar {
    int latent_dim = 0;
    int lstm_hidden = 0;
    int lstm_layers = 0;
    double lambda_alpha = 0.0;
    double lambda_beta = 0.0;
    std::uint64_t pilot_seed = 0;
};

/// Checkpoint ("g1.*", "lstm.layer<l>.*", "g2.*", "g3.*") plus a JSON
/// sidecar at <path>.json.
void save_tracker(const std::filesystem::path& path, const TrackerModel& model,
                  const TrackerSidecar& sidecar);
std::pair<TrackerModel, TrackerSidecar> load_tracker(const std::filesystem::path& path);

}  // namespace chanest
