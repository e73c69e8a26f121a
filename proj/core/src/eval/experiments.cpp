#include "chanest/eval/experiments.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <nlohmann/json.hpp>

#include "chanest/dataset_io.hpp"
#include "chanest/errors.hpp"
#include "chanest/eval/reference_curves.hpp"
#include "chanest/signaling.hpp"

namespace chanest::eval {

namespace {

// Fixed-format float for reports: deterministic and compact.
std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

std::ofstream open_out(const std::filesystem::path& path) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path);
    if (!out) throw FormatError("cannot open '" + path.string() + "' for writing");
    return out;
}

std::vector<double> nmse_per_step(const std::vector<ComplexMatrix>& estimates,
                                  const std::vector<ChannelSample>& truth) {
    std::vector<double> out;
    out.reserve(estimates.size());
    for (std::size_t t = 0; t < estimates.size(); ++t) {
        out.push_back(nmse_db(estimates[t], truth[t].H));
    }
    return out;
}

}  // namespace

std::vector<ChannelSample> make_dataset(const ExperimentConfig& cfg) {
    if (cfg.dataset_path) {
        return load_dataset(*cfg.dataset_path);
    }
    return gen_dataset(cfg.scene, cfg.region, cfg.num_samples);
}

std::vector<ChannelSample> make_eval_trajectory(const ExperimentConfig& cfg) {
    return gen_trajectory(cfg.scene, cfg.region, cfg.trajectory.start, cfg.trajectory.velocity,
                          cfg.trajectory.length, cfg.trajectory.dt);
}

std::vector<std::vector<ChannelSample>> make_training_trajectories(const ExperimentConfig& cfg,
                                                                   int count,
                                                                   std::uint64_t seed) {
    Rng rng(seed);
    const double step = cfg.trajectory.velocity.norm() * cfg.trajectory.dt;
    const int t_len = cfg.trajectory.length;
    const Vec3 extent = cfg.region.hi - cfg.region.lo;

    std::vector<std::vector<ChannelSample>> out;
    out.reserve(static_cast<std::size_t>(count));
    for (int k = 0; k < count; ++k) {
        // draw (start, heading) until the whole segment stays in the region
        for (int attempt = 0;; ++attempt) {
            if (attempt > 10000) {
                throw std::invalid_argument(
                    "make_training_trajectories: region too small for the trajectory length");
            }
            Vec3 start;
            for (int i = 0; i < 3; ++i) {
                start[i] = cfg.region.lo[i] + rng.uniform() * extent[i];
            }
            const double heading = rng.uniform(0.0, 2.0 * M_PI);
            Vec3 velocity(std::cos(heading), std::sin(heading), 0.0);
            velocity *= step / cfg.trajectory.dt;
            const Vec3 end = start + (t_len - 1) * cfg.trajectory.dt * velocity;
            if (!cfg.region.contains(end)) continue;
            out.push_back(
                gen_trajectory(cfg.scene, cfg.region, start, velocity, t_len, cfg.trajectory.dt));
            break;
        }
    }
    return out;
}

AblationResult run_ablation(const ExperimentConfig& cfg) {
    const std::vector<ChannelSample> dataset = make_dataset(cfg);
    const std::vector<ChannelSample> trajectory = make_eval_trajectory(cfg);

    AeHyper with_tc = cfg.autoencoder;
    AeHyper without_tc = cfg.autoencoder;
    without_tc.lambda_tc = 0.0;

    const AutoencoderModel model_tc = train_autoencoder(dataset, with_tc);
    const AutoencoderModel model_no_tc = train_autoencoder(dataset, without_tc);

    const RealVector d_tc = latent_smoothness(model_tc, trajectory);
    const RealVector d_no_tc = latent_smoothness(model_no_tc, trajectory);

    AblationResult r;
    r.dist_tc.assign(d_tc.data(), d_tc.data() + d_tc.size());
    r.dist_no_tc.assign(d_no_tc.data(), d_no_tc.data() + d_no_tc.size());

    RealVector time_index(d_tc.size());
    for (Eigen::Index t = 0; t < time_index.size(); ++t) time_index(t) = static_cast<double>(t);
    r.spearman_tc = spearman(time_index, d_tc);
    r.spearman_no_tc = spearman(time_index, d_no_tc);
    return r;
}

namespace {

struct Pipeline {
    AutoencoderModel autoencoder;
    TrackerModel tracker;
};

Pipeline train_pipeline(const ExperimentConfig& cfg, const std::vector<ChannelSample>& dataset,
                        const std::vector<std::vector<ChannelSample>>& trajectories,
                        const PilotConfig& pilots, const NoiseSpec& noise, double lambda_tc) {
    AeHyper hyper = cfg.autoencoder;
    hyper.lambda_tc = lambda_tc;
    Pipeline p;
    p.autoencoder = train_autoencoder(dataset, hyper);

    const std::vector<TrainingSequence> sequences = build_sequences(
        trajectories, p.autoencoder.encoder, pilots, noise, cfg.trajectory.length);

    TrackerDims dims;
    dims.obs_dim = static_cast<int>(2 * pilots.overhead());
    dims.latent_dim = cfg.autoencoder.latent_dim;
    dims.lstm_hidden = cfg.tracker.lstm_hidden;
    dims.lstm_layers = cfg.tracker.lstm_layers;
    dims.head_hidden = cfg.tracker.head_hidden;

    Rng init_rng(cfg.tracker.hyper.seed);
    TrackerModel model = make_tracker(dims, init_rng);
    p.tracker = train_tracker(sequences, std::move(model), cfg.tracker.hyper);
    return p;
}

}  // namespace

ComparisonResult run_comparison(const ExperimentConfig& cfg) {
    const std::vector<ChannelSample> dataset = make_dataset(cfg);
    const std::vector<ChannelSample> trajectory = make_eval_trajectory(cfg);

    const PilotConfig pilots = make_pilots(cfg.n_bs(), cfg.n_ue(), cfg.pilots.m_bs,
                                           cfg.pilots.m_ue, cfg.pilots.seed,
                                           cfg.pilots.amplitude);
    NoiseSpec train_noise{calibrate_noise_variance(dataset, pilots, cfg.snr_db),
                          cfg.tracker.noise_seed};

    const std::vector<std::vector<ChannelSample>> trajectories = make_training_trajectories(
        cfg, cfg.tracker.num_train_sequences, cfg.tracker.trajectory_seed);

    Pipeline tc =
        train_pipeline(cfg, dataset, trajectories, pilots, train_noise, cfg.autoencoder.lambda_tc);
    Pipeline no_tc = train_pipeline(cfg, dataset, trajectories, pilots, train_noise, 0.0);

    ComparisonResult r;
    r.tracker_params = tc.tracker.param_count();
    r.decoder_checksum_before = nn::params_checksum(param_views(tc.autoencoder.decoder));

    // evaluation observations carry independently drawn noise
    NoiseSpec eval_noise{train_noise.variance, cfg.eval_noise_seed};
    Rng eval_rng(eval_noise.rng_seed);
    const Eigen::Index t_len = static_cast<Eigen::Index>(trajectory.size());
    RealMatrix observations(2 * pilots.overhead(), t_len);
    std::vector<ComplexMatrix> raw_obs;
    raw_obs.reserve(trajectory.size());
    for (Eigen::Index t = 0; t < t_len; ++t) {
        const ComplexMatrix y =
            observe(trajectory[static_cast<std::size_t>(t)].H, pilots, eval_noise, eval_rng);
        raw_obs.push_back(y);
        observations.col(t) = flatten_observation(y);
    }

    // (a) independent minimum-norm LS per interval
    const LsEstimator ls(pilots);
    std::vector<ComplexMatrix> ls_estimates;
    ls_estimates.reserve(raw_obs.size());
    for (const ComplexMatrix& y : raw_obs) ls_estimates.push_back(ls.estimate(y));
    r.nmse_ls = nmse_per_step(ls_estimates, trajectory);

    // (b)/(c) latent tracking through the frozen decoders
    r.nmse_tc = nmse_per_step(
        infer_channels(tc.tracker, tc.autoencoder.decoder, observations, cfg.n_bs(), cfg.n_ue()),
        trajectory);
    r.nmse_notc = nmse_per_step(infer_channels(no_tc.tracker, no_tc.autoencoder.decoder,
                                               observations, cfg.n_bs(), cfg.n_ue()),
                                trajectory);

    // (d) optional direct end-to-end baseline
    if (cfg.direct.enabled) {
        DirectDims dims;
        dims.obs_dim = static_cast<int>(2 * pilots.overhead());
        dims.out_dim = 2 * cfg.n_bs() * cfg.n_ue();
        dims.lstm_layers = cfg.direct.lstm_layers;
        dims.head_hidden = cfg.direct.head_hidden;
        dims.min_hidden = cfg.direct.min_hidden;

        const std::vector<DirectSequence> sequences =
            build_direct_sequences(trajectories, pilots, train_noise, cfg.trajectory.length);
        Rng direct_rng(cfg.direct.seed);
        DirectModel direct = make_direct(dims, direct_rng);
        DirectHyper hyper{cfg.direct.learning_rate, cfg.direct.epochs, cfg.direct.seq_batch,
                          cfg.direct.seed};
        direct = train_direct(sequences, std::move(direct), hyper);
        r.direct_params = direct.param_count();
        r.nmse_direct =
            nmse_per_step(infer_direct(direct, observations, cfg.n_bs(), cfg.n_ue()), trajectory);
    } else {
        DirectDims dims;
        dims.obs_dim = static_cast<int>(2 * pilots.overhead());
        dims.out_dim = 2 * cfg.n_bs() * cfg.n_ue();
        dims.lstm_layers = cfg.direct.lstm_layers;
        dims.head_hidden = cfg.direct.head_hidden;
        dims.min_hidden = cfg.direct.min_hidden;
        Rng direct_rng(cfg.direct.seed);
        r.direct_params = make_direct(dims, direct_rng).param_count();
    }

    r.decoder_checksum_after = nn::params_checksum(param_views(tc.autoencoder.decoder));
    return r;
}

std::vector<double> run_ls_eval(const ExperimentConfig& cfg) {
    const std::vector<ChannelSample> dataset = make_dataset(cfg);
    const std::vector<ChannelSample> trajectory = make_eval_trajectory(cfg);
    const PilotConfig pilots = make_pilots(cfg.n_bs(), cfg.n_ue(), cfg.pilots.m_bs,
                                           cfg.pilots.m_ue, cfg.pilots.seed,
                                           cfg.pilots.amplitude);
    NoiseSpec noise{calibrate_noise_variance(dataset, pilots, cfg.snr_db), cfg.eval_noise_seed};
    Rng rng(noise.rng_seed);
    const LsEstimator ls(pilots);
    std::vector<ComplexMatrix> estimates;
    estimates.reserve(trajectory.size());
    for (const ChannelSample& s : trajectory) {
        estimates.push_back(ls.estimate(observe(s.H, pilots, noise, rng)));
    }
    return nmse_per_step(estimates, trajectory);
}

ScalingResult run_scaling(const ExperimentConfig& cfg) {
    ScalingResult r;
    r.n_bs_base = cfg.n_bs();
    r.base = run_comparison(cfg);

    ExperimentConfig scaled = cfg;
    scaled.scene.bs_geometry.rows *= 2;
    scaled.scene.bs_geometry.cols *= 2;
    r.n_bs_scaled = scaled.n_bs();
    r.scaled = run_comparison(scaled);
    return r;
}

void write_ablation_csv(const std::filesystem::path& path, const AblationResult& r) {
    std::ofstream out = open_out(path);
    out << "t,dist_no_tc,dist_tc\n";
    for (std::size_t t = 0; t < r.dist_tc.size(); ++t) {
        out << t << ',' << fmt(r.dist_no_tc[t]) << ',' << fmt(r.dist_tc[t]) << '\n';
    }
}

void write_comparison_csv(const std::filesystem::path& path, const ComparisonResult& r) {
    std::ofstream out = open_out(path);
    out << "t,nmse_ls,nmse_tc,nmse_notc,nmse_direct\n";
    for (std::size_t t = 0; t < r.nmse_ls.size(); ++t) {
        out << (t + 1) << ',' << fmt(r.nmse_ls[t]) << ',' << fmt(r.nmse_tc[t]) << ','
            << fmt(r.nmse_notc[t]) << ',';
        if (t < r.nmse_direct.size()) {
            out << fmt(r.nmse_direct[t]);
        } else {
            out << "nan";
        }
        out << '\n';
    }
}

void write_ls_csv(const std::filesystem::path& path, const std::vector<double>& nmse) {
    std::ofstream out = open_out(path);
    out << "t,nmse_ls\n";
    for (std::size_t t = 0; t < nmse.size(); ++t) {
        out << (t + 1) << ',' << fmt(nmse[t]) << '\n';
    }
}

void write_scaling_reports(const std::filesystem::path& out_dir, const ScalingResult& r) {
    write_comparison_csv(out_dir / ("nb" + std::to_string(r.n_bs_base)) / "comparison.csv",
                         r.base);
    write_comparison_csv(out_dir / ("nb" + std::to_string(r.n_bs_scaled)) / "comparison.csv",
                         r.scaled);
    std::ofstream out = open_out(out_dir / "params.csv");
    out << "n_bs,tracker_params,direct_params\n";
    out << r.n_bs_base << ',' << r.base.tracker_params << ',' << r.base.direct_params << '\n';
    out << r.n_bs_scaled << ',' << r.scaled.tracker_params << ',' << r.scaled.direct_params
        << '\n';
}

void write_reference_csvs(const std::filesystem::path& out_dir) {
    {
        const reference::AblationCurves c = reference::ablation_curves();
        std::ofstream out = open_out(out_dir / "reference_ablation.csv");
        out << "t,dist_no_tc,dist_tc\n";
        for (std::size_t t = 0; t < c.dist_tc.size(); ++t) {
            out << t << ',' << fmt(c.dist_no_tc[t]) << ',' << fmt(c.dist_tc[t]) << '\n';
        }
    }
    const auto write_nmse = [&](const std::filesystem::path& path,
                                const reference::NmseCurves& c) {
        std::ofstream out = open_out(path);
        out << "t,nmse_ls,nmse_tc,nmse_notc,nmse_direct\n";
        for (std::size_t t = 0; t < c.nmse_ls.size(); ++t) {
            out << (t + 1) << ',' << fmt(c.nmse_ls[t]) << ',' << fmt(c.nmse_tc[t]) << ','
                << fmt(c.nmse_notc[t]) << ',' << fmt(c.nmse_direct[t]) << '\n';
        }
    };
    write_nmse(out_dir / "reference_comparison_10x10.csv", reference::nmse_curves_10x10());
    write_nmse(out_dir / "reference_comparison_20x20.csv", reference::nmse_curves_20x20());
}

void write_manifest(const std::filesystem::path& path, const ExperimentConfig& cfg,
                    const std::string& command) {
    nlohmann::json j;
    j["command"] = command;
    j["version"] = version_string();
    j["config"] = nlohmann::json::parse(config_to_json_text(cfg));
    std::ofstream out = open_out(path);
    out << j.dump(2) << '\n';
}

std::string version_string() { return "chanest 0.1.0"; }

}  // namespace chanest::eval
