#include "chanest/tracker.hpp"

#include <cmath>
#include <fstream>
#include <nlohmann/json.hpp>
#include <numeric>
#include <stdexcept>

#include "chanest/errors.hpp"
#include "chanest/nn/adam.hpp"
#include "chanest/nn/checkpoint.hpp"

namespace chanest {

TrackerModel make_tracker(const TrackerDims& dims, Rng& rng) {
    if (dims.obs_dim < 1 || dims.latent_dim < 1) {
        throw std::invalid_argument("make_tracker: obs_dim and latent_dim must be >= 1");
    }
    TrackerModel m;
    m.g1 = nn::Mlp::make({dims.obs_dim, dims.head_hidden, dims.lstm_hidden}, rng);
    m.lstm = nn::LstmStack::make(dims.lstm_hidden, dims.lstm_hidden, dims.lstm_layers, rng);
    m.g2 = nn::Mlp::make({dims.lstm_hidden, dims.head_hidden, dims.latent_dim}, rng);
    m.g3 = nn::Mlp::make({dims.lstm_hidden, dims.head_hidden, 2}, rng);
    return m;
}

TrackerGrads zero_grads(const TrackerModel& model) {
    return {model.g1.zeros_like(), model.lstm.zeros_like(), model.g2.zeros_like(),
            model.g3.zeros_like()};
}

namespace {

template <typename ModelLike>
std::vector<nn::TensorView> collect_views(ModelLike& m) {
    std::vector<nn::TensorView> views = param_views(m.g1);
    auto lstm = param_views(m.lstm);
    views.insert(views.end(), lstm.begin(), lstm.end());
    auto g2 = param_views(m.g2);
    views.insert(views.end(), g2.begin(), g2.end());
    auto g3 = param_views(m.g3);
    views.insert(views.end(), g3.begin(), g3.end());
    return views;
}

}  // namespace

std::vector<nn::TensorView> param_views(TrackerModel& m) { return collect_views(m); }
std::vector<nn::TensorView> param_views(TrackerGrads& g) { return collect_views(g); }

std::vector<TrainingSequence> build_sequences(
    const std::vector<std::vector<ChannelSample>>& trajectories, const nn::Mlp& encoder,
    const PilotConfig& pilots, const NoiseSpec& noise, int sequence_length) {
    if (sequence_length < 1) {
        throw std::invalid_argument("build_sequences: sequence length must be >= 1");
    }
    Rng rng(noise.rng_seed);
    std::vector<TrainingSequence> out;
    out.reserve(trajectories.size());
    for (const auto& traj : trajectories) {
        if (static_cast<int>(traj.size()) < sequence_length) {
            throw std::invalid_argument("build_sequences: trajectory shorter than requested T");
        }
        TrainingSequence seq;
        const Eigen::Index obs_dim = 2 * pilots.overhead();
        seq.observations.resize(obs_dim, sequence_length);
        seq.latents.resize(encoder.output_dim(), sequence_length);
        seq.alphas.resize(sequence_length);
        seq.betas.resize(sequence_length);
        for (int t = 0; t < sequence_length; ++t) {
            const ChannelSample& s = traj[static_cast<std::size_t>(t)];
            seq.observations.col(t) = flatten_observation(observe(s.H, pilots, noise, rng));
            const PreprocResult pre = preprocess(s.H);
            seq.latents.col(t) = encoder.forward(pre.v);
            seq.alphas(t) = pre.alpha;
            seq.betas(t) = pre.beta;
        }
        out.push_back(std::move(seq));
    }
    return out;
}

TrackerOutput tracker_forward(const TrackerModel& model, const RealMatrix& observations) {
    const Eigen::Index t_len = observations.cols();
    if (t_len < 1) throw std::invalid_argument("tracker_forward: empty observation sequence");

    TrackerOutput out;
    out.latents.resize(model.g2.output_dim(), t_len);
    out.alphas.resize(t_len);
    out.betas.resize(t_len);

    nn::LstmState state = model.lstm.zero_state(1);
    for (Eigen::Index t = 0; t < t_len; ++t) {
        const RealVector a = model.g1.forward(RealVector(observations.col(t)));
        const RealMatrix h = model.lstm.step(a, state);
        out.latents.col(t) = model.g2.forward(RealVector(h.col(0)));
        const RealVector ab = model.g3.forward(RealVector(h.col(0)));
        out.alphas(t) = ab(0);
        out.betas(t) = ab(1);
    }
    return out;
}

namespace {

// Shared batched BPTT core for the latent tracker.
double tracker_loss_batch(const TrackerModel& model,
                          const std::vector<const TrainingSequence*>& batch,
                          const TrackerHyper& hyper, TrackerGrads* grads) {
    if (batch.empty()) throw std::invalid_argument("loss_lstm: empty batch");
    const Eigen::Index t_len = batch.front()->length();
    const Eigen::Index b = static_cast<Eigen::Index>(batch.size());
    for (const TrainingSequence* s : batch) {
        if (s->length() != t_len) {
            throw std::invalid_argument("loss_lstm: sequences in a batch must share T");
        }
    }
    const double denom = static_cast<double>(t_len) * static_cast<double>(b);

    // forward
    std::vector<RealMatrix> xs(static_cast<std::size_t>(t_len));
    std::vector<nn::MlpTape> g1_tapes(grads ? static_cast<std::size_t>(t_len) : 0);
    for (Eigen::Index t = 0; t < t_len; ++t) {
        RealMatrix y(batch.front()->observations.rows(), b);
        for (Eigen::Index k = 0; k < b; ++k) {
            y.col(k) = batch[static_cast<std::size_t>(k)]->observations.col(t);
        }
        xs[static_cast<std::size_t>(t)] =
            model.g1.forward(y, grads ? &g1_tapes[static_cast<std::size_t>(t)] : nullptr);
    }
    nn::LstmSeqTape lstm_tape;
    const std::vector<RealMatrix> hidden =
        model.lstm.forward(xs, grads ? &lstm_tape : nullptr);

    double loss = 0.0;
    std::vector<nn::MlpTape> g2_tapes(grads ? static_cast<std::size_t>(t_len) : 0);
    std::vector<nn::MlpTape> g3_tapes(grads ? static_cast<std::size_t>(t_len) : 0);
    std::vector<RealMatrix> d_hidden(grads ? static_cast<std::size_t>(t_len) : 0);

    for (Eigen::Index t = 0; t < t_len; ++t) {
        const RealMatrix& h = hidden[static_cast<std::size_t>(t)];
        const RealMatrix s_hat =
            model.g2.forward(h, grads ? &g2_tapes[static_cast<std::size_t>(t)] : nullptr);
        const RealMatrix ab_hat =
            model.g3.forward(h, grads ? &g3_tapes[static_cast<std::size_t>(t)] : nullptr);

        RealMatrix s_err(s_hat.rows(), b);
        RealMatrix ab_err(2, b);
        for (Eigen::Index k = 0; k < b; ++k) {
            const TrainingSequence& seq = *batch[static_cast<std::size_t>(k)];
            s_err.col(k) = s_hat.col(k) - seq.latents.col(t);
            ab_err(0, k) = ab_hat(0, k) - seq.alphas(t);
            ab_err(1, k) = ab_hat(1, k) - seq.betas(t);
        }
        loss += s_err.squaredNorm() + hyper.lambda_alpha * ab_err.row(0).squaredNorm() +
                hyper.lambda_beta * ab_err.row(1).squaredNorm();

        if (grads) {
            const RealMatrix d_s = (2.0 / denom) * s_err;
            RealMatrix d_ab(2, b);
            d_ab.row(0) = (2.0 * hyper.lambda_alpha / denom) * ab_err.row(0);
            d_ab.row(1) = (2.0 * hyper.lambda_beta / denom) * ab_err.row(1);
            RealMatrix dh =
                model.g2.backward(g2_tapes[static_cast<std::size_t>(t)], d_s, grads->g2);
            dh += model.g3.backward(g3_tapes[static_cast<std::size_t>(t)], d_ab, grads->g3);
            d_hidden[static_cast<std::size_t>(t)] = std::move(dh);
        }
    }
    loss /= denom;

    if (grads) {
        const std::vector<RealMatrix> d_xs = model.lstm.backward(lstm_tape, d_hidden, grads->lstm);
        for (Eigen::Index t = 0; t < t_len; ++t) {
            model.g1.backward(g1_tapes[static_cast<std::size_t>(t)],
                              d_xs[static_cast<std::size_t>(t)], grads->g1);
        }
    }
    return loss;
}

}  // namespace

double loss_lstm(const TrackerModel& model, const std::vector<const TrainingSequence*>& batch,
                 const TrackerHyper& hyper, TrackerGrads* grads) {
    return tracker_loss_batch(model, batch, hyper, grads);
}

double loss_lstm(const TrackerModel& model, const TrainingSequence& seq,
                 const TrackerHyper& hyper, TrackerGrads* grads) {
    return tracker_loss_batch(model, {&seq}, hyper, grads);
}

TrackerModel train_tracker(const std::vector<TrainingSequence>& sequences, TrackerModel model,
                           const TrackerHyper& hyper, TrackerTrainRecord* record) {
    if (sequences.empty()) throw std::invalid_argument("train_tracker: no sequences");
    Rng rng(hyper.seed);

    TrackerGrads grads = zero_grads(model);
    std::vector<nn::TensorView> params = param_views(model);
    std::vector<nn::TensorView> grad_views = param_views(grads);
    nn::Adam adam({hyper.learning_rate}, nn::total_size(params));

    std::vector<std::size_t> order(sequences.size());
    std::iota(order.begin(), order.end(), 0);
    if (record) *record = {};

    for (int epoch = 0; epoch < hyper.epochs; ++epoch) {
        rng.shuffle(order);
        double sum_loss = 0.0;
        int batches = 0;
        for (std::size_t start = 0; start < order.size();
             start += static_cast<std::size_t>(hyper.seq_batch)) {
            const std::size_t stop =
                std::min(order.size(), start + static_cast<std::size_t>(hyper.seq_batch));
            std::vector<const TrainingSequence*> batch;
            batch.reserve(stop - start);
            for (std::size_t k = start; k < stop; ++k) batch.push_back(&sequences[order[k]]);

            grads.g1.set_all(0.0);
            grads.g2.set_all(0.0);
            grads.g3.set_all(0.0);
            for (auto& l : grads.lstm.layers()) {
                l.Wx.setZero();
                l.Wh.setZero();
                l.b.setZero();
            }
            sum_loss += tracker_loss_batch(model, batch, hyper, &grads);
            adam.step(params, grad_views);
            ++batches;
        }
        const double epoch_loss = sum_loss / std::max(batches, 1);
        if (!std::isfinite(epoch_loss)) {
            throw TrainingError("train_tracker: loss is not finite", epoch);
        }
        if (record) {
            record->epoch_loss.push_back(epoch_loss);
            record->epochs_run = epoch + 1;
        }
    }
    return model;
}

std::vector<ComplexMatrix> infer_channels(const TrackerModel& model, const nn::Mlp& decoder,
                                          const RealMatrix& observations, Eigen::Index n_bs,
                                          Eigen::Index n_ue) {
    const TrackerOutput out = tracker_forward(model, observations);
    std::vector<ComplexMatrix> channels;
    channels.reserve(static_cast<std::size_t>(observations.cols()));
    for (Eigen::Index t = 0; t < observations.cols(); ++t) {
        const RealVector v = decoder.forward(RealVector(out.latents.col(t)));
        channels.push_back(postprocess(v, out.alphas(t), out.betas(t), n_bs, n_ue));
    }
    return channels;
}

// --- direct baseline --------------------------------------------------------

DirectModel make_direct(const DirectDims& dims, Rng& rng) {
    if (dims.obs_dim < 1 || dims.out_dim < 1) {
        throw std::invalid_argument("make_direct: obs_dim and out_dim must be >= 1");
    }
    const int hidden = dims.hidden();
    DirectModel m;
    m.g1 = nn::Mlp::make({dims.obs_dim, dims.head_hidden, hidden}, rng);
    m.lstm = nn::LstmStack::make(hidden, hidden, dims.lstm_layers, rng);
    m.head = nn::Mlp::make({hidden, dims.head_hidden, dims.out_dim}, rng);
    return m;
}

std::vector<DirectSequence> build_direct_sequences(
    const std::vector<std::vector<ChannelSample>>& trajectories, const PilotConfig& pilots,
    const NoiseSpec& noise, int sequence_length) {
    if (sequence_length < 1) {
        throw std::invalid_argument("build_direct_sequences: sequence length must be >= 1");
    }
    Rng rng(noise.rng_seed);
    std::vector<DirectSequence> out;
    out.reserve(trajectories.size());
    for (const auto& traj : trajectories) {
        if (static_cast<int>(traj.size()) < sequence_length) {
            throw std::invalid_argument(
                "build_direct_sequences: trajectory shorter than requested T");
        }
        DirectSequence seq;
        seq.observations.resize(2 * pilots.overhead(), sequence_length);
        seq.channels.resize(2 * traj.front().H.size(), sequence_length);
        for (int t = 0; t < sequence_length; ++t) {
            const ChannelSample& s = traj[static_cast<std::size_t>(t)];
            seq.observations.col(t) = flatten_observation(observe(s.H, pilots, noise, rng));
            seq.channels.col(t) = flatten_observation(s.H);
        }
        out.push_back(std::move(seq));
    }
    return out;
}

namespace {

struct DirectGrads {
    nn::Mlp g1;
    nn::LstmStack lstm;
    nn::Mlp head;
};

double direct_loss_batch(const DirectModel& model,
                         const std::vector<const DirectSequence*>& batch, DirectGrads* grads) {
    const Eigen::Index t_len = batch.front()->observations.cols();
    const Eigen::Index b = static_cast<Eigen::Index>(batch.size());
    const double denom = static_cast<double>(t_len) * static_cast<double>(b);
    const double scale = model.target_scale;

    std::vector<RealMatrix> xs(static_cast<std::size_t>(t_len));
    std::vector<nn::MlpTape> g1_tapes(grads ? static_cast<std::size_t>(t_len) : 0);
    for (Eigen::Index t = 0; t < t_len; ++t) {
        RealMatrix y(batch.front()->observations.rows(), b);
        for (Eigen::Index k = 0; k < b; ++k) {
            y.col(k) = batch[static_cast<std::size_t>(k)]->observations.col(t);
        }
        xs[static_cast<std::size_t>(t)] =
            model.g1.forward(y, grads ? &g1_tapes[static_cast<std::size_t>(t)] : nullptr);
    }
    nn::LstmSeqTape lstm_tape;
    const std::vector<RealMatrix> hidden =
        model.lstm.forward(xs, grads ? &lstm_tape : nullptr);

    double loss = 0.0;
    std::vector<nn::MlpTape> head_tapes(grads ? static_cast<std::size_t>(t_len) : 0);
    std::vector<RealMatrix> d_hidden(grads ? static_cast<std::size_t>(t_len) : 0);
    for (Eigen::Index t = 0; t < t_len; ++t) {
        const RealMatrix out = model.head.forward(
            hidden[static_cast<std::size_t>(t)],
            grads ? &head_tapes[static_cast<std::size_t>(t)] : nullptr);
        RealMatrix err(out.rows(), b);
        for (Eigen::Index k = 0; k < b; ++k) {
            err.col(k) = out.col(k) - batch[static_cast<std::size_t>(k)]->channels.col(t) / scale;
        }
        loss += err.squaredNorm();
        if (grads) {
            d_hidden[static_cast<std::size_t>(t)] = model.head.backward(
                head_tapes[static_cast<std::size_t>(t)], (2.0 / denom) * err, grads->head);
        }
    }
    loss /= denom;
    if (grads) {
        const std::vector<RealMatrix> d_xs = model.lstm.backward(lstm_tape, d_hidden, grads->lstm);
        for (Eigen::Index t = 0; t < t_len; ++t) {
            model.g1.backward(g1_tapes[static_cast<std::size_t>(t)],
                              d_xs[static_cast<std::size_t>(t)], grads->g1);
        }
    }
    return loss;
}

}  // namespace

DirectModel train_direct(const std::vector<DirectSequence>& sequences, DirectModel model,
                         const DirectHyper& hyper, TrackerTrainRecord* record) {
    if (sequences.empty()) throw std::invalid_argument("train_direct: no sequences");
    Rng rng(hyper.seed);

    // normalize the regression targets to unit scale
    double sq_sum = 0.0;
    long count = 0;
    for (const DirectSequence& s : sequences) {
        sq_sum += s.channels.squaredNorm();
        count += s.channels.size();
    }
    const double scale = std::sqrt(sq_sum / static_cast<double>(count));
    model.target_scale = (scale > 0.0) ? scale : 1.0;

    DirectGrads grads{model.g1.zeros_like(), model.lstm.zeros_like(), model.head.zeros_like()};
    std::vector<nn::TensorView> params = param_views(model.g1);
    {
        auto v = param_views(model.lstm);
        params.insert(params.end(), v.begin(), v.end());
        auto h = param_views(model.head);
        params.insert(params.end(), h.begin(), h.end());
    }
    std::vector<nn::TensorView> grad_views = param_views(grads.g1);
    {
        auto v = param_views(grads.lstm);
        grad_views.insert(grad_views.end(), v.begin(), v.end());
        auto h = param_views(grads.head);
        grad_views.insert(grad_views.end(), h.begin(), h.end());
    }
    nn::Adam adam({hyper.learning_rate}, nn::total_size(params));

    std::vector<std::size_t> order(sequences.size());
    std::iota(order.begin(), order.end(), 0);
    if (record) *record = {};

    for (int epoch = 0; epoch < hyper.epochs; ++epoch) {
        rng.shuffle(order);
        double sum_loss = 0.0;
        int batches = 0;
        for (std::size_t start = 0; start < order.size();
             start += static_cast<std::size_t>(hyper.seq_batch)) {
            const std::size_t stop =
                std::min(order.size(), start + static_cast<std::size_t>(hyper.seq_batch));
            std::vector<const DirectSequence*> batch;
            batch.reserve(stop - start);
            for (std::size_t k = start; k < stop; ++k) batch.push_back(&sequences[order[k]]);

            grads.g1.set_all(0.0);
            grads.head.set_all(0.0);
            for (auto& l : grads.lstm.layers()) {
                l.Wx.setZero();
                l.Wh.setZero();
                l.b.setZero();
            }
            sum_loss += direct_loss_batch(model, batch, &grads);
            adam.step(params, grad_views);
            ++batches;
        }
        const double epoch_loss = sum_loss / std::max(batches, 1);
        if (!std::isfinite(epoch_loss)) {
            throw TrainingError("train_direct: loss is not finite", epoch);
        }
        if (record) {
            record->epoch_loss.push_back(epoch_loss);
            record->epochs_run = epoch + 1;
        }
    }
    return model;
}

void save_tracker(const std::filesystem::path& path, const TrackerModel& model,
                  const TrackerSidecar& sidecar) {
    std::vector<nn::NamedTensor> tensors = nn::mlp_tensors(model.g1, "g1");
    {
        auto lstm = nn::lstm_tensors(model.lstm, "lstm");
        tensors.insert(tensors.end(), std::make_move_iterator(lstm.begin()),
                       std::make_move_iterator(lstm.end()));
        auto g2 = nn::mlp_tensors(model.g2, "g2");
        tensors.insert(tensors.end(), std::make_move_iterator(g2.begin()),
                       std::make_move_iterator(g2.end()));
        auto g3 = nn::mlp_tensors(model.g3, "g3");
        tensors.insert(tensors.end(), std::make_move_iterator(g3.begin()),
                       std::make_move_iterator(g3.end()));
    }
    nn::save_checkpoint(path, tensors);

    nlohmann::json j = {
        {"latent_dim", sidecar.latent_dim},   {"lstm_hidden", sidecar.lstm_hidden},
        {"lstm_layers", sidecar.lstm_layers}, {"lambda_alpha", sidecar.lambda_alpha},
        {"lambda_beta", sidecar.lambda_beta}, {"pilot_seed", sidecar.pilot_seed},
    };
    std::ofstream side(path.string() + ".json");
    if (!side) throw FormatError("cannot write sidecar for '" + path.string() + "'");
    side << j.dump(2) << '\n';
}

std::pair<TrackerModel, TrackerSidecar> load_tracker(const std::filesystem::path& path) {
    const auto tensors = nn::load_checkpoint_map(path);
    TrackerModel model;
    model.g1 = nn::mlp_from_tensors(tensors, "g1");
    model.lstm = nn::lstm_from_tensors(tensors, "lstm");
    model.g2 = nn::mlp_from_tensors(tensors, "g2");
    model.g3 = nn::mlp_from_tensors(tensors, "g3");

    TrackerSidecar sidecar;
    sidecar.latent_dim = model.g2.output_dim();
    sidecar.lstm_hidden = model.lstm.hidden_size();
    sidecar.lstm_layers = model.lstm.num_layers();
    std::ifstream side(path.string() + ".json");
    if (side) {
        nlohmann::json j;
        try {
            side >> j;
            sidecar.latent_dim = j.value("latent_dim", sidecar.latent_dim);
            sidecar.lstm_hidden = j.value("lstm_hidden", sidecar.lstm_hidden);
            sidecar.lstm_layers = j.value("lstm_layers", sidecar.lstm_layers);
            sidecar.lambda_alpha = j.value("lambda_alpha", sidecar.lambda_alpha);
            sidecar.lambda_beta = j.value("lambda_beta", sidecar.lambda_beta);
            sidecar.pilot_seed = j.value("pilot_seed", sidecar.pilot_seed);
        } catch (const nlohmann::json::exception& e) {
            throw FormatError("tracker sidecar: " + std::string(e.what()));
        }
    }
    return {std::move(model), sidecar};
}

std::vector<ComplexMatrix> infer_direct(const DirectModel& model, const RealMatrix& observations,
                                        Eigen::Index n_bs, Eigen::Index n_ue) {
    const Eigen::Index t_len = observations.cols();
    std::vector<ComplexMatrix> channels;
    channels.reserve(static_cast<std::size_t>(t_len));
    nn::LstmState state = model.lstm.zero_state(1);
    for (Eigen::Index t = 0; t < t_len; ++t) {
        const RealVector a = model.g1.forward(RealVector(observations.col(t)));
        const RealMatrix h = model.lstm.step(a, state);
        const RealVector flat = model.head.forward(RealVector(h.col(0))) * model.target_scale;
        channels.push_back(unflatten_observation(flat, n_bs, n_ue));
    }
    return channels;
}

}  // namespace chanest
