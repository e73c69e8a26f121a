#include "chanest/eval/config.hpp"

#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>

#include "chanest/errors.hpp"

namespace chanest::eval {

namespace {

using nlohmann::json;

Vec3 vec3_from(const json& j, const char* what) {
    if (!j.is_array() || j.size() != 3) {
        throw FormatError(std::string("config: ") + what + " must be an array of 3 numbers");
    }
    return Vec3(j[0].get<double>(), j[1].get<double>(), j[2].get<double>());
}

json vec3_to(const Vec3& v) { return json::array({v.x(), v.y(), v.z()}); }

void require(bool ok, const std::string& message) {
    if (!ok) throw FormatError("config: " + message);
}

}  // namespace

ExperimentConfig config_from_json_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw FormatError(std::string("config: ") + e.what(), e.byte);
    }

    ExperimentConfig cfg;
    try {
        cfg.name = j.value("name", cfg.name);

        if (j.contains("scene")) {
            const json& s = j["scene"];
            cfg.scene.bs_geometry.rows = s.value("bs_rows", cfg.scene.bs_geometry.rows);
            cfg.scene.bs_geometry.cols = s.value("bs_cols", cfg.scene.bs_geometry.cols);
            cfg.scene.ue_geometry.rows = s.value("ue_rows", cfg.scene.ue_geometry.rows);
            cfg.scene.ue_geometry.cols = s.value("ue_cols", cfg.scene.ue_geometry.cols);
            const double spacing = s.value("element_spacing", 0.5);
            cfg.scene.bs_geometry.element_spacing = spacing;
            cfg.scene.ue_geometry.element_spacing = spacing;
            if (s.contains("bs_position")) {
                cfg.scene.bs_position = vec3_from(s["bs_position"], "scene.bs_position");
            }
            cfg.scene.num_paths = s.value("num_paths", cfg.scene.num_paths);
            if (s.contains("scatterers")) {
                cfg.scene.scatterer_positions.clear();
                for (const json& p : s["scatterers"]) {
                    cfg.scene.scatterer_positions.push_back(vec3_from(p, "scene.scatterers[]"));
                }
            }
            cfg.scene.carrier_hz = s.value("carrier_hz", cfg.scene.carrier_hz);
            cfg.scene.rng_seed = s.value("seed", cfg.scene.rng_seed);
        }

        if (j.contains("region")) {
            cfg.region.lo = vec3_from(j["region"]["lo"], "region.lo");
            cfg.region.hi = vec3_from(j["region"]["hi"], "region.hi");
        }

        if (j.contains("dataset")) {
            cfg.num_samples = j["dataset"].value("num_samples", cfg.num_samples);
            if (j["dataset"].contains("path")) {
                cfg.dataset_path = j["dataset"]["path"].get<std::string>();
            }
        }

        if (j.contains("trajectory")) {
            const json& t = j["trajectory"];
            if (t.contains("start")) cfg.trajectory.start = vec3_from(t["start"], "trajectory.start");
            if (t.contains("velocity")) {
                cfg.trajectory.velocity = vec3_from(t["velocity"], "trajectory.velocity");
            }
            cfg.trajectory.dt = t.value("dt", cfg.trajectory.dt);
            cfg.trajectory.length = t.value("length", cfg.trajectory.length);
        }

        if (j.contains("pilots")) {
            const json& p = j["pilots"];
            cfg.pilots.m_bs = p.value("m_bs", cfg.pilots.m_bs);
            cfg.pilots.m_ue = p.value("m_ue", cfg.pilots.m_ue);
            cfg.pilots.amplitude = p.value("amplitude", cfg.pilots.amplitude);
            cfg.pilots.seed = p.value("seed", cfg.pilots.seed);
        }

        cfg.snr_db = j.value("snr_db", cfg.snr_db);
        cfg.eval_noise_seed = j.value("eval_noise_seed", cfg.eval_noise_seed);

        if (j.contains("autoencoder")) {
            const json& a = j["autoencoder"];
            cfg.autoencoder.latent_dim = a.value("latent_dim", cfg.autoencoder.latent_dim);
            if (a.contains("encoder_hidden")) {
                cfg.autoencoder.encoder_hidden = a["encoder_hidden"].get<std::vector<int>>();
            }
            if (a.contains("decoder_hidden")) {
                cfg.autoencoder.decoder_hidden = a["decoder_hidden"].get<std::vector<int>>();
            }
            cfg.autoencoder.lambda_tc = a.value("lambda_tc", cfg.autoencoder.lambda_tc);
            cfg.autoencoder.perturb_std = a.value("perturb_std", cfg.autoencoder.perturb_std);
            cfg.autoencoder.batch_size = a.value("batch_size", cfg.autoencoder.batch_size);
            cfg.autoencoder.learning_rate =
                a.value("learning_rate", cfg.autoencoder.learning_rate);
            cfg.autoencoder.max_epochs = a.value("max_epochs", cfg.autoencoder.max_epochs);
            cfg.autoencoder.plateau_patience =
                a.value("plateau_patience", cfg.autoencoder.plateau_patience);
            cfg.autoencoder.seed = a.value("seed", cfg.autoencoder.seed);
        }

        if (j.contains("tracker")) {
            const json& t = j["tracker"];
            cfg.tracker.lstm_hidden = t.value("lstm_hidden", cfg.tracker.lstm_hidden);
            cfg.tracker.lstm_layers = t.value("lstm_layers", cfg.tracker.lstm_layers);
            cfg.tracker.head_hidden = t.value("head_hidden", cfg.tracker.head_hidden);
            cfg.tracker.hyper.lambda_alpha =
                t.value("lambda_alpha", cfg.tracker.hyper.lambda_alpha);
            cfg.tracker.hyper.lambda_beta = t.value("lambda_beta", cfg.tracker.hyper.lambda_beta);
            cfg.tracker.hyper.learning_rate =
                t.value("learning_rate", cfg.tracker.hyper.learning_rate);
            cfg.tracker.hyper.epochs = t.value("epochs", cfg.tracker.hyper.epochs);
            cfg.tracker.hyper.seq_batch = t.value("seq_batch", cfg.tracker.hyper.seq_batch);
            cfg.tracker.hyper.seed = t.value("seed", cfg.tracker.hyper.seed);
            cfg.tracker.num_train_sequences =
                t.value("num_train_sequences", cfg.tracker.num_train_sequences);
            cfg.tracker.trajectory_seed = t.value("trajectory_seed", cfg.tracker.trajectory_seed);
            cfg.tracker.noise_seed = t.value("noise_seed", cfg.tracker.noise_seed);
        }

        if (j.contains("direct")) {
            const json& d = j["direct"];
            cfg.direct.enabled = d.value("enabled", cfg.direct.enabled);
            cfg.direct.lstm_layers = d.value("lstm_layers", cfg.direct.lstm_layers);
            cfg.direct.head_hidden = d.value("head_hidden", cfg.direct.head_hidden);
            cfg.direct.min_hidden = d.value("min_hidden", cfg.direct.min_hidden);
            cfg.direct.learning_rate = d.value("learning_rate", cfg.direct.learning_rate);
            cfg.direct.epochs = d.value("epochs", cfg.direct.epochs);
            cfg.direct.seq_batch = d.value("seq_batch", cfg.direct.seq_batch);
            cfg.direct.seed = d.value("seed", cfg.direct.seed);
        }
    } catch (const json::exception& e) {
        throw FormatError(std::string("config: ") + e.what());
    }

    require(cfg.scene.bs_geometry.rows >= 1 && cfg.scene.bs_geometry.cols >= 1,
            "BS geometry must be at least 1x1");
    require(cfg.scene.ue_geometry.rows >= 1 && cfg.scene.ue_geometry.cols >= 1,
            "UE geometry must be at least 1x1");
    require(cfg.scene.num_paths >= 1, "num_paths must be >= 1");
    require(static_cast<int>(cfg.scene.scatterer_positions.size()) >= cfg.scene.num_paths - 1,
            "need at least num_paths - 1 scatterers");
    require(cfg.scene.carrier_hz > 0.0, "carrier_hz must be positive");
    require(cfg.num_samples >= 1, "dataset.num_samples must be >= 1");
    require(cfg.trajectory.length >= 1, "trajectory.length must be >= 1");
    require(cfg.pilots.m_bs >= 1 && cfg.pilots.m_ue >= 1, "pilot dimensions must be >= 1");
    require(cfg.autoencoder.latent_dim >= 1, "latent_dim must be >= 1");
    require(cfg.autoencoder.batch_size >= 2, "autoencoder.batch_size must be >= 2");
    require(cfg.tracker.lstm_hidden >= 1 && cfg.tracker.lstm_layers >= 1,
            "tracker LSTM dimensions must be >= 1");
    require(cfg.tracker.num_train_sequences >= 1, "tracker.num_train_sequences must be >= 1");

    if (cfg.dataset_path && !std::filesystem::exists(*cfg.dataset_path)) {
        throw FormatError("config: dataset path '" + *cfg.dataset_path + "' does not exist");
    }
    return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw FormatError("cannot open config '" + path.string() + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return config_from_json_text(buf.str());
}

std::string config_to_json_text(const ExperimentConfig& cfg) {
    json scatterers = json::array();
    for (const Vec3& p : cfg.scene.scatterer_positions) scatterers.push_back(vec3_to(p));

    json j = {
        {"name", cfg.name},
        {"scene",
         {{"bs_rows", cfg.scene.bs_geometry.rows},
          {"bs_cols", cfg.scene.bs_geometry.cols},
          {"ue_rows", cfg.scene.ue_geometry.rows},
          {"ue_cols", cfg.scene.ue_geometry.cols},
          {"element_spacing", cfg.scene.bs_geometry.element_spacing},
          {"bs_position", vec3_to(cfg.scene.bs_position)},
          {"num_paths", cfg.scene.num_paths},
          {"scatterers", scatterers},
          {"carrier_hz", cfg.scene.carrier_hz},
          {"seed", cfg.scene.rng_seed}}},
        {"region", {{"lo", vec3_to(cfg.region.lo)}, {"hi", vec3_to(cfg.region.hi)}}},
        {"dataset", {{"num_samples", cfg.num_samples}}},
        {"trajectory",
         {{"start", vec3_to(cfg.trajectory.start)},
          {"velocity", vec3_to(cfg.trajectory.velocity)},
          {"dt", cfg.trajectory.dt},
          {"length", cfg.trajectory.length}}},
        {"pilots",
         {{"m_bs", cfg.pilots.m_bs},
          {"m_ue", cfg.pilots.m_ue},
          {"amplitude", cfg.pilots.amplitude},
          {"seed", cfg.pilots.seed}}},
        {"snr_db", cfg.snr_db},
        {"eval_noise_seed", cfg.eval_noise_seed},
        {"autoencoder",
         {{"latent_dim", cfg.autoencoder.latent_dim},
          {"encoder_hidden", cfg.autoencoder.encoder_hidden},
          {"decoder_hidden", cfg.autoencoder.decoder_hidden},
          {"lambda_tc", cfg.autoencoder.lambda_tc},
          {"perturb_std", cfg.autoencoder.perturb_std},
          {"batch_size", cfg.autoencoder.batch_size},
          {"learning_rate", cfg.autoencoder.learning_rate},
          {"max_epochs", cfg.autoencoder.max_epochs},
          {"plateau_patience", cfg.autoencoder.plateau_patience},
          {"seed", cfg.autoencoder.seed}}},
        {"tracker",
         {{"lstm_hidden", cfg.tracker.lstm_hidden},
          {"lstm_layers", cfg.tracker.lstm_layers},
          {"head_hidden", cfg.tracker.head_hidden},
          {"lambda_alpha", cfg.tracker.hyper.lambda_alpha},
          {"lambda_beta", cfg.tracker.hyper.lambda_beta},
          {"learning_rate", cfg.tracker.hyper.learning_rate},
          {"epochs", cfg.tracker.hyper.epochs},
          {"seq_batch", cfg.tracker.hyper.seq_batch},
          {"seed", cfg.tracker.hyper.seed},
          {"num_train_sequences", cfg.tracker.num_train_sequences},
          {"trajectory_seed", cfg.tracker.trajectory_seed},
          {"noise_seed", cfg.tracker.noise_seed}}},
        {"direct",
         {{"enabled", cfg.direct.enabled},
          {"lstm_layers", cfg.direct.lstm_layers},
          {"head_hidden", cfg.direct.head_hidden},
          {"min_hidden", cfg.direct.min_hidden},
          {"learning_rate", cfg.direct.learning_rate},
          {"epochs", cfg.direct.epochs},
          {"seq_batch", cfg.direct.seq_batch},
          {"seed", cfg.direct.seed}}},
    };
    if (cfg.dataset_path) j["dataset"]["path"] = *cfg.dataset_path;
    return j.dump(2) + "\n";
}

void save_config(const std::filesystem::path& path, const ExperimentConfig& cfg) {
    std::ofstream out(path);
    if (!out) throw FormatError("cannot open '" + path.string() + "' for writing");
    out << config_to_json_text(cfg);
}

}  // namespace chanest::eval
