// Command-line front end: dataset generation, training stages, and the
// benchmark experiments, driven by a JSON config.
//
// Exit codes: 0 success, 1 usage error, 2 data/format error,
//             3 numerical/training error.

#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "chanest/dataset_io.hpp"
#include "chanest/errors.hpp"
#include "chanest/eval/experiments.hpp"
#include "chanest/nn/checkpoint.hpp"
#include "chanest/signaling.hpp"

namespace {

namespace fs = std::filesystem;
using namespace chanest;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitNumeric = 3;

struct CommonArgs {
    std::string config_path;
    std::string out_dir = "out";
    std::optional<std::uint64_t> seed;
};

void add_common(CLI::App* cmd, CommonArgs& args, bool config_required = true) {
    auto* opt = cmd->add_option("--config", args.config_path, "JSON experiment config");
    if (config_required) opt->required();
    cmd->add_option("--out", args.out_dir, "output directory (created if missing)");
    cmd->add_option("--seed", args.seed, "master seed overriding every configured seed");
}

eval::ExperimentConfig load(const CommonArgs& args) {
    eval::ExperimentConfig cfg = eval::load_config(args.config_path);
    if (args.seed) {
        const std::uint64_t s = *args.seed;
        cfg.scene.rng_seed = s;
        cfg.pilots.seed = s + 1;
        cfg.autoencoder.seed = s + 2;
        cfg.tracker.hyper.seed = s + 3;
        cfg.tracker.trajectory_seed = s + 4;
        cfg.tracker.noise_seed = s + 5;
        cfg.eval_noise_seed = s + 6;
        cfg.direct.seed = s + 7;
    }
    return cfg;
}

std::string command_line(int argc, char** argv) {
    std::string s;
    for (int i = 0; i < argc; ++i) {
        if (i) s += ' ';
        s += argv[i];
    }
    return s;
}

int run_gen_data(const CommonArgs& args, const std::string& command) {
    const eval::ExperimentConfig cfg = load(args);
    const auto dataset = eval::make_dataset(cfg);
    fs::create_directories(args.out_dir);
    const fs::path path = fs::path(args.out_dir) / "dataset.bin";
    save_dataset(path, dataset, cfg.scene.carrier_hz);
    eval::write_manifest(fs::path(args.out_dir) / "gen-data_manifest.json", cfg, command);
    std::cout << "wrote " << dataset.size() << " samples to " << path.string() << "\n";
    return kExitOk;
}

int run_train_ae(const CommonArgs& args, const std::string& command) {
    const eval::ExperimentConfig cfg = load(args);
    const auto dataset = eval::make_dataset(cfg);
    AeTrainRecord record;
    const AutoencoderModel model = train_autoencoder(dataset, cfg.autoencoder, &record);
    fs::create_directories(args.out_dir);
    const fs::path ckpt = fs::path(args.out_dir) / "ae.ckpt";
    save_autoencoder(ckpt, model, cfg.autoencoder);
    {
        std::ofstream curve(fs::path(args.out_dir) / "ae_curve.csv");
        curve << "epoch,loss,loss_ci,loss_tc\n";
        for (std::size_t e = 0; e < record.epoch_loss.size(); ++e) {
            curve << e << ',' << record.epoch_loss[e] << ',' << record.epoch_ci[e] << ','
                  << record.epoch_tc[e] << '\n';
        }
    }
    eval::write_manifest(fs::path(args.out_dir) / "train-ae_manifest.json", cfg, command);
    std::cout << "trained " << record.epochs_run << " epochs, final loss "
              << record.epoch_loss.back() << ", saved " << ckpt.string() << "\n";
    return kExitOk;
}

int run_train_tracker(const CommonArgs& args, const std::string& ae_path,
                      const std::string& command) {
    const eval::ExperimentConfig cfg = load(args);
    const fs::path ckpt_in =
        ae_path.empty() ? fs::path(args.out_dir) / "ae.ckpt" : fs::path(ae_path);
    auto [ae, ae_hyper] = load_autoencoder(ckpt_in);

    const auto dataset = eval::make_dataset(cfg);
    const PilotConfig pilots = make_pilots(cfg.n_bs(), cfg.n_ue(), cfg.pilots.m_bs,
                                           cfg.pilots.m_ue, cfg.pilots.seed,
                                           cfg.pilots.amplitude);
    if (2 * ae.encoder.input_dim() != 4 * cfg.n_bs() * cfg.n_ue()) {
        throw FormatError("autoencoder checkpoint input dim does not match the scene");
    }
    const NoiseSpec noise{calibrate_noise_variance(dataset, pilots, cfg.snr_db),
                          cfg.tracker.noise_seed};
    const auto trajectories = eval::make_training_trajectories(
        cfg, cfg.tracker.num_train_sequences, cfg.tracker.trajectory_seed);
    const auto sequences =
        build_sequences(trajectories, ae.encoder, pilots, noise, cfg.trajectory.length);

    const std::uint64_t decoder_before = nn::params_checksum(param_views(ae.decoder));

    TrackerDims dims;
    dims.obs_dim = static_cast<int>(2 * pilots.overhead());
    dims.latent_dim = ae.latent_dim;
    dims.lstm_hidden = cfg.tracker.lstm_hidden;
    dims.lstm_layers = cfg.tracker.lstm_layers;
    dims.head_hidden = cfg.tracker.head_hidden;
    Rng init_rng(cfg.tracker.hyper.seed);
    TrackerModel model = make_tracker(dims, init_rng);
    TrackerTrainRecord record;
    model = train_tracker(sequences, std::move(model), cfg.tracker.hyper, &record);

    const std::uint64_t decoder_after = nn::params_checksum(param_views(ae.decoder));

    fs::create_directories(args.out_dir);
    const fs::path ckpt = fs::path(args.out_dir) / "tracker.ckpt";
    TrackerSidecar sidecar;
    sidecar.latent_dim = ae.latent_dim;
    sidecar.lstm_hidden = cfg.tracker.lstm_hidden;
    sidecar.lstm_layers = cfg.tracker.lstm_layers;
    sidecar.lambda_alpha = cfg.tracker.hyper.lambda_alpha;
    sidecar.lambda_beta = cfg.tracker.hyper.lambda_beta;
    sidecar.pilot_seed = cfg.pilots.seed;
    save_tracker(ckpt, model, sidecar);
    {
        std::ofstream curve(fs::path(args.out_dir) / "tracker_curve.csv");
        curve << "epoch,loss\n";
        for (std::size_t e = 0; e < record.epoch_loss.size(); ++e) {
            curve << e << ',' << record.epoch_loss[e] << '\n';
        }
    }
    eval::write_manifest(fs::path(args.out_dir) / "train-tracker_manifest.json", cfg, command);
    if (decoder_before != decoder_after) {
        std::cerr << "decoder parameters changed during tracker training\n";
        return kExitNumeric;
    }
    std::cout << "trained " << record.epochs_run << " epochs, final loss "
              << record.epoch_loss.back() << ", saved " << ckpt.string()
              << " (decoder checksum unchanged)\n";
    return kExitOk;
}

int run_eval_ls(const CommonArgs& args, const std::string& command) {
    const eval::ExperimentConfig cfg = load(args);
    const std::vector<double> nmse = eval::run_ls_eval(cfg);
    eval::write_ls_csv(fs::path(args.out_dir) / "ls.csv", nmse);
    eval::write_manifest(fs::path(args.out_dir) / "eval-ls_manifest.json", cfg, command);
    std::cout << "mean LS NMSE " << eval::mean(nmse) << " dB over " << nmse.size()
              << " intervals\n";
    return kExitOk;
}

int run_ablation_cmd(const CommonArgs& args, const std::string& command) {
    const eval::ExperimentConfig cfg = load(args);
    const eval::AblationResult r = eval::run_ablation(cfg);
    eval::write_ablation_csv(fs::path(args.out_dir) / "ablation.csv", r);
    eval::write_reference_csvs(args.out_dir);
    eval::write_manifest(fs::path(args.out_dir) / "run-ablation_manifest.json", cfg, command);
    std::cout << "spearman(t, d): with distance loss " << r.spearman_tc << ", without "
              << r.spearman_no_tc << "\n";
    return kExitOk;
}

int run_comparison_cmd(const CommonArgs& args, const std::string& command) {
    const eval::ExperimentConfig cfg = load(args);
    const eval::ComparisonResult r = eval::run_comparison(cfg);
    eval::write_comparison_csv(fs::path(args.out_dir) / "comparison.csv", r);
    eval::write_reference_csvs(args.out_dir);
    eval::write_manifest(fs::path(args.out_dir) / "run-comparison_manifest.json", cfg, command);
    std::cout << "mean NMSE [dB]: ls " << eval::mean(r.nmse_ls) << ", tracking+tc "
              << eval::mean(r.nmse_tc) << ", tracking-no-tc " << eval::mean(r.nmse_notc);
    if (!r.nmse_direct.empty()) std::cout << ", direct " << eval::mean(r.nmse_direct);
    std::cout << "\n";
    return kExitOk;
}

int run_scaling_cmd(const CommonArgs& args, const std::string& command) {
    const eval::ExperimentConfig cfg = load(args);
    const eval::ScalingResult r = eval::run_scaling(cfg);
    eval::write_scaling_reports(fs::path(args.out_dir) / "scaling", r);
    eval::write_reference_csvs(args.out_dir);
    eval::write_manifest(fs::path(args.out_dir) / "run-scaling_manifest.json", cfg, command);
    std::cout << "tracker params " << r.base.tracker_params << " -> " << r.scaled.tracker_params
              << ", direct params " << r.base.direct_params << " -> " << r.scaled.direct_params
              << "\n";
    return kExitOk;
}

int run_grad_check(std::uint64_t seed) {
    const eval::GradientSuiteResult r = eval::run_gradient_suite(seed);
    std::printf("mlp        %.3e\n", r.mlp);
    std::printf("lstm       %.3e\n", r.lstm);
    std::printf("loss_ci    %.3e\n", r.loss_ci);
    std::printf("loss_tc    %.3e\n", r.loss_tc);
    std::printf("loss_lstm  %.3e\n", r.loss_lstm);
    if (r.worst() >= 1e-4) {
        std::cerr << "gradient check failed: worst error " << r.worst() << "\n";
        return kExitNumeric;
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Model-free massive-MIMO channel estimation workbench"};
    app.require_subcommand(1);

    CommonArgs gen_args, ae_args, tracker_args, ls_args, abl_args, cmp_args, scale_args;
    std::string tracker_ae_path;
    std::uint64_t grad_seed = 12345;

    add_common(app.add_subcommand("gen-data", "generate and save a channel dataset"), gen_args);
    add_common(app.add_subcommand("train-ae", "train the autoencoder"), ae_args);
    auto* tracker_cmd =
        app.add_subcommand("train-tracker", "train the latent tracker against a saved autoencoder");
    add_common(tracker_cmd, tracker_args);
    tracker_cmd->add_option("--ae", tracker_ae_path, "autoencoder checkpoint (default <out>/ae.ckpt)");
    add_common(app.add_subcommand("eval-ls", "least-squares baseline over the eval trajectory"),
               ls_args);
    add_common(app.add_subcommand("run-ablation", "latent smoothness with/without distance loss"),
               abl_args);
    add_common(app.add_subcommand("run-comparison", "NMSE-over-time comparison of all methods"),
               cmp_args);
    add_common(app.add_subcommand("run-scaling", "comparison at 1x and 4x BS antennas"),
               scale_args);
    auto* grad_cmd = app.add_subcommand("grad-check", "finite-difference gradient verification");
    grad_cmd->add_option("--seed", grad_seed, "seed for the toy models");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    const std::string command = command_line(argc, argv);
    try {
        if (app.got_subcommand("gen-data")) return run_gen_data(gen_args, command);
        if (app.got_subcommand("train-ae")) return run_train_ae(ae_args, command);
        if (app.got_subcommand("train-tracker")) {
            return run_train_tracker(tracker_args, tracker_ae_path, command);
        }
        if (app.got_subcommand("eval-ls")) return run_eval_ls(ls_args, command);
        if (app.got_subcommand("run-ablation")) return run_ablation_cmd(abl_args, command);
        if (app.got_subcommand("run-comparison")) return run_comparison_cmd(cmp_args, command);
        if (app.got_subcommand("run-scaling")) return run_scaling_cmd(scale_args, command);
        if (app.got_subcommand("grad-check")) return run_grad_check(grad_seed);
    } catch (const FormatError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitData;
    } catch (const TrainingError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumeric;
    } catch (const NumericalError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumeric;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitData;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumeric;
    }
    return kExitUsage;
}
