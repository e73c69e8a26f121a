#pragma once

#include <cstdint>
#include <filesystem>
#include <utility>
#include <vector>

#include "chanest/channel.hpp"
#include "chanest/linalg.hpp"
#include "chanest/nn/mlp.hpp"
#include "chanest/rng.hpp"

namespace chanest {

/// Channel flattened to a real vector: amplitudes standardized by their
/// mean/std (alpha, beta), phases scaled to [-1, 1] by pi.
struct PreprocResult {
    RealVector v;        // [(|H| - alpha)/beta ; arg(H)/pi], length 2*N_B*N_U
    double alpha = 0.0;  // mean of amplitude entries
    double beta = 1.0;   // population std of amplitude entries
    bool degenerate_amplitude = false;  // beta fell below the guard and was set to 1
};

PreprocResult preprocess(const ComplexMatrix& h);

/// Inverse map: H = (beta*ivec(v_amp) + alpha) .* exp(j*pi*ivec(v_phase)).
/// A negative reconstructed amplitude is passed through unchanged (it acts
/// as a pi phase flip).
ComplexMatrix postprocess(const RealVector& v, double alpha, double beta, Eigen::Index rows,
                          Eigen::Index cols);

struct AutoencoderModel {
    nn::Mlp encoder;  // 2*N_B*N_U -> latent
    nn::Mlp decoder;  // latent -> 2*N_B*N_U
    int latent_dim = 0;
};

/// Gradient buffers shaped like the model.
struct AeGrads {
    nn::Mlp encoder;
    nn::Mlp decoder;
};

struct AeHyper {
    int latent_dim = 64;
    std::vector<int> encoder_hidden = {1280, 256};
    std::vector<int> decoder_hidden = {256, 1280};
    double lambda_tc = 0.1;    // weight of the latent-distance loss
    double perturb_std = 0.05; // std of the latent perturbation in the reconstruction loss
    int batch_size = 64;
    double learning_rate = 1e-3;
    int max_epochs = 500;
    int plateau_patience = 50; // early stop after this many epochs without improvement
    std::uint64_t seed = 0;
};

AutoencoderModel make_autoencoder(int input_dim, const AeHyper& hyper, Rng& rng);
AeGrads zero_grads(const AutoencoderModel& model);

/// Columns of the result are f(H) for each sample; optional per-sample
/// normalization scalars.
RealMatrix preprocess_batch(const std::vector<ChannelSample>& samples, RealVector* alphas = nullptr,
                            RealVector* betas = nullptr);
RealMatrix positions_of(const std::vector<ChannelSample>& samples);

/// Reconstruction loss: mean over columns of ||v - d(e(v) + n)||^2 with the
/// given latent perturbation (latent_dim x batch, treated as constant).
/// Accumulates exact parameter gradients scaled by grad_scale.
double loss_ci(const AutoencoderModel& model, const RealMatrix& v_batch,
               const RealMatrix& latent_noise, AeGrads* grads, double grad_scale = 1.0);

/// Same with noise drawn fresh from rng (std perturb_std per entry).
double loss_ci(const AutoencoderModel& model, const RealMatrix& v_batch, double perturb_std,
               Rng& rng, AeGrads* grads, double grad_scale = 1.0);

struct TcResult {
    double loss = 0.0;
    bool guard_latent = false;    // std of the latent distance matrix was ~0
    bool guard_position = false;  // std of the position distance matrix was ~0
};

/// Distance-geometry loss on raw latents: squared pairwise-distance matrices
/// of latents and positions are standardized (population statistics over all
/// K^2 entries, diagonal included) and compared in squared Frobenius norm.
/// Writes the exact gradient wrt the latents if d_latents is non-null.
TcResult loss_tc_latent(const RealMatrix& latents, const RealMatrix& positions,
                        RealMatrix* d_latents);

/// Same loss through the encoder, with parameter gradients (scaled by
/// grad_scale) accumulated into grads.
TcResult loss_tc(const AutoencoderModel& model, const RealMatrix& v_batch,
                 const RealMatrix& positions, AeGrads* grads, double grad_scale = 1.0);

struct AeTrainRecord {
    std::vector<double> epoch_loss;  // mean combined objective per epoch
    std::vector<double> epoch_ci;
    std::vector<double> epoch_tc;
    int epochs_run = 0;
};

/// Minibatch Adam on L_CI + lambda * L_TC. Deterministic per seed.
/// Throws TrainingError if the loss becomes non-finite.
AutoencoderModel train_autoencoder(const std::vector<ChannelSample>& dataset,
                                   const AeHyper& hyper, AeTrainRecord* record = nullptr);

/// d(t) = ||s(t) - s(0)||_2 over a trajectory, normalized by its maximum
/// (all zeros if every distance is zero).
RealVector latent_smoothness(const AutoencoderModel& model,
                             const std::vector<ChannelSample>& trajectory);

/// Checkpoint ("enc.<l>.W" / "dec.<l>.W" tensors) plus a JSON sidecar at
/// <path>.json carrying dims and hyperparameters.
void save_autoencoder(const std::filesystem::path& path, const AutoencoderModel& model,
                      const AeHyper& hyper);
std::pair<AutoencoderModel, AeHyper> load_autoencoder(const std::filesystem::path& path);

}  // namespace chanest
