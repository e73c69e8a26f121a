#include "chanest/autoencoder.hpp"

#include <cmath>
#include <fstream>
#include <nlohmann/json.hpp>
#include <numeric>
#include <stdexcept>

#include "chanest/errors.hpp"
#include "chanest/nn/adam.hpp"
#include "chanest/nn/checkpoint.hpp"

namespace chanest {

namespace {

constexpr double kStdGuard = 1e-12;

// squared pairwise distances between the columns of m; explicit differences
// (not the Gram identity) so nearby columns do not lose precision to
// cancellation
RealMatrix pairwise_sq_dist(const RealMatrix& m) {
    const Eigen::Index k = m.cols();
    RealMatrix d = RealMatrix::Zero(k, k);
    for (Eigen::Index j = 0; j < k; ++j) {
        for (Eigen::Index i = j + 1; i < k; ++i) {
            const double sq = (m.col(i) - m.col(j)).squaredNorm();
            d(i, j) = sq;
            d(j, i) = sq;
        }
    }
    return d;
}

}  // namespace

PreprocResult preprocess(const ComplexMatrix& h) {
    const Eigen::Index n = h.size();
    PreprocResult r;
    r.v.resize(2 * n);

    RealVector amp(n), phase(n);
    for (Eigen::Index k = 0; k < n; ++k) {
        const std::complex<double> z = *(h.data() + k);  // column-major = vec order
        amp(k) = std::abs(z);
        double p = std::arg(z);
        if (p == -M_PI) p = M_PI;  // contract: phases in (-pi, pi]
        phase(k) = p;
    }
    r.alpha = amp.mean();
    r.beta = std::sqrt((amp.array() - r.alpha).square().mean());
    if (r.beta < kStdGuard) {
        r.beta = 1.0;
        r.degenerate_amplitude = true;
    }
    r.v.head(n) = (amp.array() - r.alpha) / r.beta;
    r.v.tail(n) = phase / M_PI;
    return r;
}

ComplexMatrix postprocess(const RealVector& v, double alpha, double beta, Eigen::Index rows,
                          Eigen::Index cols) {
    const Eigen::Index n = rows * cols;
    if (v.size() != 2 * n) {
        throw std::invalid_argument("postprocess: vector length " + std::to_string(v.size()) +
                                    " does not match 2*" + std::to_string(rows) + "*" +
                                    std::to_string(cols));
    }
    ComplexMatrix h(rows, cols);
    for (Eigen::Index k = 0; k < n; ++k) {
        const double amp = beta * v(k) + alpha;
        const double phase = M_PI * v(n + k);
        *(h.data() + k) = amp * std::complex<double>(std::cos(phase), std::sin(phase));
    }
    return h;
}

AutoencoderModel make_autoencoder(int input_dim, const AeHyper& hyper, Rng& rng) {
    if (input_dim < 1 || hyper.latent_dim < 1) {
        throw std::invalid_argument("make_autoencoder: dimensions must be >= 1");
    }
    std::vector<int> enc = {input_dim};
    enc.insert(enc.end(), hyper.encoder_hidden.begin(), hyper.encoder_hidden.end());
    enc.push_back(hyper.latent_dim);
    std::vector<int> dec = {hyper.latent_dim};
    dec.insert(dec.end(), hyper.decoder_hidden.begin(), hyper.decoder_hidden.end());
    dec.push_back(input_dim);

    AutoencoderModel m;
    m.encoder = nn::Mlp::make(enc, rng);
    m.decoder = nn::Mlp::make(dec, rng);
    m.latent_dim = hyper.latent_dim;
    return m;
}

AeGrads zero_grads(const AutoencoderModel& model) {
    return {model.encoder.zeros_like(), model.decoder.zeros_like()};
}

RealMatrix preprocess_batch(const std::vector<ChannelSample>& samples, RealVector* alphas,
                            RealVector* betas) {
    if (samples.empty()) throw std::invalid_argument("preprocess_batch: no samples");
    const Eigen::Index dim = 2 * samples.front().H.size();
    RealMatrix v(dim, static_cast<Eigen::Index>(samples.size()));
    if (alphas) alphas->resize(static_cast<Eigen::Index>(samples.size()));
    if (betas) betas->resize(static_cast<Eigen::Index>(samples.size()));
    for (std::size_t k = 0; k < samples.size(); ++k) {
        PreprocResult r = preprocess(samples[k].H);
        v.col(static_cast<Eigen::Index>(k)) = r.v;
        if (alphas) (*alphas)(static_cast<Eigen::Index>(k)) = r.alpha;
        if (betas) (*betas)(static_cast<Eigen::Index>(k)) = r.beta;
    }
    return v;
}

RealMatrix positions_of(const std::vector<ChannelSample>& samples) {
    RealMatrix p(3, static_cast<Eigen::Index>(samples.size()));
    for (std::size_t k = 0; k < samples.size(); ++k) {
        p.col(static_cast<Eigen::Index>(k)) = samples[k].position;
    }
    return p;
}

double loss_ci(const AutoencoderModel& model, const RealMatrix& v_batch,
               const RealMatrix& latent_noise, AeGrads* grads, double grad_scale) {
    const Eigen::Index batch = v_batch.cols();
    if (batch < 1) throw std::invalid_argument("loss_ci: empty batch");
    if (latent_noise.rows() != model.latent_dim || latent_noise.cols() != batch) {
        throw std::invalid_argument("loss_ci: perturbation shape mismatch");
    }
    nn::MlpTape enc_tape, dec_tape;
    const RealMatrix latent = model.encoder.forward(v_batch, grads ? &enc_tape : nullptr);
    const RealMatrix perturbed = latent + latent_noise;
    const RealMatrix recon = model.decoder.forward(perturbed, grads ? &dec_tape : nullptr);
    const RealMatrix err = recon - v_batch;
    const double loss = err.squaredNorm() / static_cast<double>(batch);
    if (grads) {
        const RealMatrix d_recon = (2.0 * grad_scale / static_cast<double>(batch)) * err;
        const RealMatrix d_latent = model.decoder.backward(dec_tape, d_recon, grads->decoder);
        model.encoder.backward(enc_tape, d_latent, grads->encoder);
    }
    return loss;
}

double loss_ci(const AutoencoderModel& model, const RealMatrix& v_batch, double perturb_std,
               Rng& rng, AeGrads* grads, double grad_scale) {
    RealMatrix noise = RealMatrix::Zero(model.latent_dim, v_batch.cols());
    if (perturb_std > 0.0) {
        for (Eigen::Index j = 0; j < noise.cols(); ++j)
            for (Eigen::Index i = 0; i < noise.rows(); ++i)
                noise(i, j) = rng.normal(0.0, perturb_std);
    }
    return loss_ci(model, v_batch, noise, grads, grad_scale);
}

TcResult loss_tc_latent(const RealMatrix& latents, const RealMatrix& positions,
                        RealMatrix* d_latents) {
    const Eigen::Index k = latents.cols();
    if (k < 2) throw std::invalid_argument("loss_tc: batch must contain at least 2 samples");
    if (positions.cols() != k) {
        throw std::invalid_argument("loss_tc: latent/position count mismatch");
    }
    const double kk = static_cast<double>(k) * static_cast<double>(k);

    const RealMatrix d_bar = pairwise_sq_dist(latents);
    const RealMatrix b_bar = pairwise_sq_dist(positions);

    TcResult result;
    const double mu_d = d_bar.mean();
    double sigma_d = std::sqrt((d_bar.array() - mu_d).square().mean());
    if (sigma_d < kStdGuard) {
        sigma_d = 1.0;
        result.guard_latent = true;
    }
    const double mu_b = b_bar.mean();
    double sigma_b = std::sqrt((b_bar.array() - mu_b).square().mean());
    if (sigma_b < kStdGuard) {
        sigma_b = 1.0;
        result.guard_position = true;
    }

    const RealMatrix d = ((d_bar.array() - mu_d) / sigma_d).matrix();
    const RealMatrix b = ((b_bar.array() - mu_b) / sigma_b).matrix();
    const RealMatrix diff = d - b;
    result.loss = diff.squaredNorm();

    if (d_latents) {
        const RealMatrix e = 2.0 * diff;
        const double e_mean = e.mean();
        // dL/dD_bar through the standardization; the sigma term drops out
        // when the guard replaced sigma with a constant.
        RealMatrix g;
        if (result.guard_latent) {
            g = (e.array() - e_mean).matrix();
        } else {
            const double c2 = (e.cwiseProduct(d)).sum() / kk;
            g = ((e.array() - e_mean - c2 * d.array()) / sigma_d).matrix();
        }
        const RealMatrix gs = g + g.transpose();
        const RealVector row_sums = gs.rowwise().sum();
        // dL/ds_m = 2 * sum_j (gs_mj) * (s_m - s_j)
        *d_latents = 2.0 * (latents * row_sums.asDiagonal() - latents * gs.transpose());
    }
    return result;
}

TcResult loss_tc(const AutoencoderModel& model, const RealMatrix& v_batch,
                 const RealMatrix& positions, AeGrads* grads, double grad_scale) {
    nn::MlpTape enc_tape;
    const RealMatrix latents = model.encoder.forward(v_batch, grads ? &enc_tape : nullptr);
    RealMatrix d_latents;
    TcResult result = loss_tc_latent(latents, positions, grads ? &d_latents : nullptr);
    if (grads) {
        d_latents *= grad_scale;
        model.encoder.backward(enc_tape, d_latents, grads->encoder);
    }
    return result;
}

AutoencoderModel train_autoencoder(const std::vector<ChannelSample>& dataset,
                                   const AeHyper& hyper, AeTrainRecord* record) {
    if (dataset.size() < 2) {
        throw std::invalid_argument("train_autoencoder: need at least 2 samples");
    }
    Rng rng(hyper.seed);
    const Eigen::Index input_dim = 2 * dataset.front().H.size();
    AutoencoderModel model = make_autoencoder(static_cast<int>(input_dim), hyper, rng);

    const RealMatrix v_all = preprocess_batch(dataset);
    const RealMatrix p_all = positions_of(dataset);
    const Eigen::Index n = v_all.cols();

    AeGrads grads = zero_grads(model);
    std::vector<nn::TensorView> params = param_views(model.encoder);
    {
        auto dec = param_views(model.decoder);
        params.insert(params.end(), dec.begin(), dec.end());
    }
    std::vector<nn::TensorView> grad_views = param_views(grads.encoder);
    {
        auto dec = param_views(grads.decoder);
        grad_views.insert(grad_views.end(), dec.begin(), dec.end());
    }
    nn::Adam adam({hyper.learning_rate}, nn::total_size(params));

    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);

    double best = std::numeric_limits<double>::infinity();
    int best_epoch = -1;
    if (record) *record = {};

    for (int epoch = 0; epoch < hyper.max_epochs; ++epoch) {
        rng.shuffle(order);
        double sum_loss = 0.0, sum_ci = 0.0, sum_tc = 0.0;
        int batches = 0;
        for (Eigen::Index start = 0; start < n; start += hyper.batch_size) {
            const Eigen::Index b = std::min<Eigen::Index>(hyper.batch_size, n - start);
            if (b < 2) break;  // the distance loss needs pairs
            RealMatrix vb(v_all.rows(), b);
            RealMatrix pb(3, b);
            for (Eigen::Index j = 0; j < b; ++j) {
                vb.col(j) = v_all.col(order[static_cast<std::size_t>(start + j)]);
                pb.col(j) = p_all.col(order[static_cast<std::size_t>(start + j)]);
            }
            grads.encoder.set_all(0.0);
            grads.decoder.set_all(0.0);
            const double ci = loss_ci(model, vb, hyper.perturb_std, rng, &grads);
            double tc = 0.0;
            if (hyper.lambda_tc > 0.0) {
                tc = loss_tc(model, vb, pb, &grads, hyper.lambda_tc).loss;
            }
            adam.step(params, grad_views);
            sum_ci += ci;
            sum_tc += tc;
            sum_loss += ci + hyper.lambda_tc * tc;
            ++batches;
        }
        const double epoch_loss = sum_loss / std::max(batches, 1);
        if (!std::isfinite(epoch_loss)) {
            throw TrainingError("train_autoencoder: loss is not finite", epoch);
        }
        if (record) {
            record->epoch_loss.push_back(epoch_loss);
            record->epoch_ci.push_back(sum_ci / std::max(batches, 1));
            record->epoch_tc.push_back(sum_tc / std::max(batches, 1));
            record->epochs_run = epoch + 1;
        }
        if (epoch_loss < best * (1.0 - 1e-4)) {
            best = epoch_loss;
            best_epoch = epoch;
        } else if (epoch - best_epoch >= hyper.plateau_patience) {
            break;
        }
    }
    return model;
}

void save_autoencoder(const std::filesystem::path& path, const AutoencoderModel& model,
                      const AeHyper& hyper) {
    std::vector<nn::NamedTensor> tensors = nn::mlp_tensors(model.encoder, "enc");
    std::vector<nn::NamedTensor> dec = nn::mlp_tensors(model.decoder, "dec");
    tensors.insert(tensors.end(), std::make_move_iterator(dec.begin()),
                   std::make_move_iterator(dec.end()));
    nn::save_checkpoint(path, tensors);

    nlohmann::json j = {
        {"input_dim", model.encoder.input_dim()},
        {"latent_dim", model.latent_dim},
        {"encoder_hidden", hyper.encoder_hidden},
        {"decoder_hidden", hyper.decoder_hidden},
        {"lambda_tc", hyper.lambda_tc},
        {"perturb_std", hyper.perturb_std},
        {"seed", hyper.seed},
    };
    std::ofstream side(path.string() + ".json");
    if (!side) throw FormatError("cannot write sidecar for '" + path.string() + "'");
    side << j.dump(2) << '\n';
}

std::pair<AutoencoderModel, AeHyper> load_autoencoder(const std::filesystem::path& path) {
    const auto tensors = nn::load_checkpoint_map(path);
    AutoencoderModel model;
    model.encoder = nn::mlp_from_tensors(tensors, "enc");
    model.decoder = nn::mlp_from_tensors(tensors, "dec");
    model.latent_dim = model.encoder.output_dim();
    if (model.decoder.input_dim() != model.latent_dim) {
        throw FormatError("autoencoder checkpoint: encoder/decoder latent dims disagree");
    }

    AeHyper hyper;
    std::ifstream side(path.string() + ".json");
    if (side) {
        nlohmann::json j;
        try {
            side >> j;
            hyper.latent_dim = j.value("latent_dim", model.latent_dim);
            hyper.encoder_hidden = j.value("encoder_hidden", hyper.encoder_hidden);
            hyper.decoder_hidden = j.value("decoder_hidden", hyper.decoder_hidden);
            hyper.lambda_tc = j.value("lambda_tc", hyper.lambda_tc);
            hyper.perturb_std = j.value("perturb_std", hyper.perturb_std);
            hyper.seed = j.value("seed", hyper.seed);
        } catch (const nlohmann::json::exception& e) {
            throw FormatError("autoencoder sidecar: " + std::string(e.what()));
        }
    } else {
        hyper.latent_dim = model.latent_dim;
    }
    return {std::move(model), hyper};
}

RealVector latent_smoothness(const AutoencoderModel& model,
                             const std::vector<ChannelSample>& trajectory) {
    if (trajectory.size() < 2) {
        throw std::invalid_argument("latent_smoothness: trajectory must have >= 2 samples");
    }
    const RealMatrix v = preprocess_batch(trajectory);
    const RealMatrix s = model.encoder.forward(v);
    RealVector d(s.cols());
    for (Eigen::Index t = 0; t < s.cols(); ++t) {
        d(t) = (s.col(t) - s.col(0)).norm();
    }
    const double peak = d.maxCoeff();
    if (peak > 0.0) d /= peak;
    return d;
}

}  // namespace chanest
