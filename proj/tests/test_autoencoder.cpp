#include "chanest/autoencoder.hpp"

#include <gtest/gtest.h>

#include <filesystem>

#include "chanest/errors.hpp"

using namespace chanest;

namespace {

ComplexMatrix random_channel(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
    ComplexMatrix m(rows, cols);
    for (Eigen::Index j = 0; j < cols; ++j)
        for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = {rng.normal(), rng.normal()};
    return m;
}

// small autoencoder whose encoder/decoder are exact identities
AutoencoderModel identity_autoencoder(int dim) {
    AutoencoderModel m;
    std::vector<nn::DenseLayer> enc;
    enc.push_back({RealMatrix::Identity(dim, dim), RealVector::Zero(dim),
                   nn::Activation::kLinear});
    m.encoder = nn::Mlp::from_layers(std::move(enc));
    std::vector<nn::DenseLayer> dec;
    dec.push_back({RealMatrix::Identity(dim, dim), RealVector::Zero(dim),
                   nn::Activation::kLinear});
    m.decoder = nn::Mlp::from_layers(std::move(dec));
    m.latent_dim = dim;
    return m;
}

}  // namespace

TEST(Preprocess, TwoEntryExample) {
    // H = [1*e^{j0}, 3*e^{j pi/2}]: alpha = 2, beta = 1 (population std),
    // v = [-1, 1, 0, 0.5]
    ComplexMatrix h(1, 2);
    h(0, 0) = std::polar(1.0, 0.0);
    h(0, 1) = std::polar(3.0, M_PI / 2.0);
    const PreprocResult r = preprocess(h);
    EXPECT_NEAR(r.alpha, 2.0, 1e-15);
    EXPECT_NEAR(r.beta, 1.0, 1e-15);
    ASSERT_EQ(r.v.size(), 4);
    EXPECT_NEAR(r.v(0), -1.0, 1e-14);
    EXPECT_NEAR(r.v(1), 1.0, 1e-14);
    EXPECT_NEAR(r.v(2), 0.0, 1e-14);
    EXPECT_NEAR(r.v(3), 0.5, 1e-14);
    EXPECT_FALSE(r.degenerate_amplitude);
}

TEST(Preprocess, ConstantAmplitudeGuard) {
    ComplexMatrix h(2, 2);
    h.setConstant(std::polar(2.5, 0.3));
    const PreprocResult r = preprocess(h);
    EXPECT_TRUE(r.degenerate_amplitude);
    EXPECT_EQ(r.beta, 1.0);
    EXPECT_NEAR(r.v.head(4).norm(), 0.0, 1e-14);
}

TEST(Preprocess, PhaseHalfStaysInUnitRange) {
    Rng rng(3);
    for (int trial = 0; trial < 1000; ++trial) {
        const ComplexMatrix h = random_channel(2, 3, rng);
        const PreprocResult r = preprocess(h);
        const auto phases = r.v.tail(6);
        EXPECT_LE(phases.maxCoeff(), 1.0);
        EXPECT_GE(phases.minCoeff(), -1.0);
    }
}

TEST(Postprocess, InvertsPreprocess) {
    Rng rng(7);
    for (int trial = 0; trial < 1000; ++trial) {
        const ComplexMatrix h = random_channel(3, 2, rng);
        const PreprocResult r = preprocess(h);
        const ComplexMatrix back = postprocess(r.v, r.alpha, r.beta, 3, 2);
        EXPECT_LT((back - h).norm() / h.norm(), 1e-12);
    }
}

TEST(Postprocess, ZeroVectorGivesConstantAlpha) {
    const RealVector v = RealVector::Zero(8);
    const ComplexMatrix h = postprocess(v, 1.0, 123.0, 2, 2);
    for (Eigen::Index j = 0; j < 2; ++j)
        for (Eigen::Index i = 0; i < 2; ++i)
            EXPECT_NEAR(std::abs(h(i, j) - std::complex<double>(1.0)), 0.0, 1e-15);
}

TEST(Postprocess, NegativeAmplitudePassesThrough) {
    RealVector v = RealVector::Zero(2);
    v(0) = -3.0;  // amplitude entry
    v(1) = 0.25;  // phase entry: pi/4
    const ComplexMatrix h = postprocess(v, 1.0, 1.0, 1, 1);
    // amplitude beta*(-3) + alpha = -2; entry = -2 * e^{j pi/4}
    const std::complex<double> expected = -2.0 * std::polar(1.0, M_PI / 4.0);
    EXPECT_NEAR(std::abs(h(0, 0) - expected), 0.0, 1e-14);
}

TEST(Postprocess, LengthMismatchThrows) {
    EXPECT_THROW(postprocess(RealVector::Zero(7), 0.0, 1.0, 2, 2), std::invalid_argument);
}

TEST(LossCi, IdentityMapZeroPerturbationGivesZero) {
    const AutoencoderModel model = identity_autoencoder(4);
    Rng rng(9);
    RealMatrix v(4, 3);
    for (Eigen::Index j = 0; j < 3; ++j)
        for (Eigen::Index i = 0; i < 4; ++i) v(i, j) = rng.normal();
    const double loss = loss_ci(model, v, RealMatrix::Zero(4, 3), nullptr);
    EXPECT_NEAR(loss, 0.0, 1e-28);
}

TEST(LossCi, MatchesPerSampleRecomputation) {
    Rng rng(11);
    AeHyper hyper;
    hyper.latent_dim = 3;
    hyper.encoder_hidden = {6};
    hyper.decoder_hidden = {6};
    const AutoencoderModel model = make_autoencoder(5, hyper, rng);
    RealMatrix v(5, 4);
    for (Eigen::Index j = 0; j < 4; ++j)
        for (Eigen::Index i = 0; i < 5; ++i) v(i, j) = rng.normal();

    const double batched = loss_ci(model, v, RealMatrix::Zero(3, 4), nullptr);
    double per_sample = 0.0;
    for (Eigen::Index k = 0; k < 4; ++k) {
        const RealVector rec =
            model.decoder.forward(RealVector(model.encoder.forward(RealVector(v.col(k)))));
        per_sample += (v.col(k) - rec).squaredNorm();
    }
    per_sample /= 4.0;
    EXPECT_NEAR(batched, per_sample, 1e-12 * std::max(1.0, per_sample));
}

TEST(LossTc, TwoSampleBatchIsAlwaysZero) {
    Rng rng(13);
    for (int trial = 0; trial < 10; ++trial) {
        RealMatrix latents(4, 2), positions(3, 2);
        for (Eigen::Index i = 0; i < 4; ++i) {
            latents(i, 0) = rng.normal();
            latents(i, 1) = rng.normal();
        }
        for (Eigen::Index i = 0; i < 3; ++i) {
            positions(i, 0) = rng.normal();
            positions(i, 1) = rng.normal();
        }
        const TcResult r = loss_tc_latent(latents, positions, nullptr);
        EXPECT_NEAR(r.loss, 0.0, 1e-10);
    }
}

TEST(LossTc, SimilarityTransformOfPositionsGivesZero) {
    Rng rng(17);
    const Eigen::Index k = 6;
    RealMatrix positions(3, k);
    for (Eigen::Index j = 0; j < k; ++j)
        for (Eigen::Index i = 0; i < 3; ++i) positions(i, j) = rng.normal();

    // latents = c * R * p + t with an orthogonal R
    const Eigen::Matrix3d r3 =
        Eigen::AngleAxisd(0.8, Eigen::Vector3d(1, 2, -1).normalized()).toRotationMatrix();
    const double c = 2.7;
    const Eigen::Vector3d t(0.4, -1.0, 3.0);
    RealMatrix latents = (c * (r3 * positions)).colwise() + t;

    const TcResult r = loss_tc_latent(latents, positions, nullptr);
    EXPECT_NEAR(r.loss, 0.0, 1e-10);
}

TEST(LossTc, InvariantUnderLatentScalingAndShift) {
    Rng rng(19);
    const Eigen::Index k = 8;
    RealMatrix latents(5, k), positions(3, k);
    for (Eigen::Index j = 0; j < k; ++j) {
        for (Eigen::Index i = 0; i < 5; ++i) latents(i, j) = rng.normal();
        for (Eigen::Index i = 0; i < 3; ++i) positions(i, j) = rng.normal();
    }
    const double base = loss_tc_latent(latents, positions, nullptr).loss;
    RealVector shift(5);
    for (Eigen::Index i = 0; i < 5; ++i) shift(i) = rng.normal();
    const RealMatrix transformed = (3.1 * latents).colwise() + shift;
    const double moved = loss_tc_latent(transformed, positions, nullptr).loss;
    EXPECT_NEAR(moved, base, 1e-10 * std::max(1.0, base));
}

TEST(LossTc, PermutationSymmetric) {
    Rng rng(23);
    const Eigen::Index k = 7;
    RealMatrix latents(4, k), positions(3, k);
    for (Eigen::Index j = 0; j < k; ++j) {
        for (Eigen::Index i = 0; i < 4; ++i) latents(i, j) = rng.normal();
        for (Eigen::Index i = 0; i < 3; ++i) positions(i, j) = rng.normal();
    }
    const double base = loss_tc_latent(latents, positions, nullptr).loss;

    std::vector<Eigen::Index> perm = {3, 0, 6, 2, 5, 1, 4};
    RealMatrix lp(4, k), pp(3, k);
    for (Eigen::Index j = 0; j < k; ++j) {
        lp.col(j) = latents.col(perm[static_cast<std::size_t>(j)]);
        pp.col(j) = positions.col(perm[static_cast<std::size_t>(j)]);
    }
    const double permuted = loss_tc_latent(lp, pp, nullptr).loss;
    EXPECT_NEAR(permuted, base, 1e-10 * std::max(1.0, base));
}

TEST(LossTc, TooSmallBatchThrows) {
    RealMatrix one(3, 1), pos(3, 1);
    one.setZero();
    pos.setZero();
    EXPECT_THROW(loss_tc_latent(one, pos, nullptr), std::invalid_argument);
}

TEST(LossTc, DegenerateStdGuards) {
    RealMatrix latents = RealMatrix::Zero(3, 4);  // all identical latents
    Rng rng(29);
    RealMatrix positions(3, 4);
    for (Eigen::Index j = 0; j < 4; ++j)
        for (Eigen::Index i = 0; i < 3; ++i) positions(i, j) = rng.normal();
    RealMatrix grad;
    const TcResult r = loss_tc_latent(latents, positions, &grad);
    EXPECT_TRUE(r.guard_latent);
    EXPECT_FALSE(r.guard_position);
    EXPECT_TRUE(grad.allFinite());

    const TcResult r2 = loss_tc_latent(positions, RealMatrix::Zero(3, 4), &grad);
    EXPECT_TRUE(r2.guard_position);
    EXPECT_TRUE(grad.allFinite());
}

TEST(LossTc, OutputBiasDirectionIsExactlyFlat) {
    // translating every latent cancels in the pairwise distances, so the
    // analytic gradient of the encoder's output bias must vanish identically
    Rng rng(31);
    AeHyper hyper;
    hyper.latent_dim = 3;
    hyper.encoder_hidden = {6};
    hyper.decoder_hidden = {6};
    AutoencoderModel model = make_autoencoder(5, hyper, rng);
    AeGrads grads = zero_grads(model);
    RealMatrix v(5, 6), p(3, 6);
    for (Eigen::Index j = 0; j < 6; ++j) {
        for (Eigen::Index i = 0; i < 5; ++i) v(i, j) = rng.normal();
        for (Eigen::Index i = 0; i < 3; ++i) p(i, j) = rng.normal();
    }
    const double base = loss_tc(model, v, p, &grads).loss;
    EXPECT_LT(grads.encoder.layers().back().b.norm(), 1e-12);

    model.encoder.layers().back().b.array() += 1.23;
    const double shifted = loss_tc(model, v, p, nullptr).loss;
    EXPECT_NEAR(shifted, base, 1e-9 * std::max(1.0, base));
}

TEST(LossTc, NonnegativeAndZeroOnlyAtMatch) {
    Rng rng(37);
    RealMatrix latents(3, 5), positions(3, 5);
    for (Eigen::Index j = 0; j < 5; ++j) {
        for (Eigen::Index i = 0; i < 3; ++i) {
            latents(i, j) = rng.normal();
            positions(i, j) = rng.normal();
        }
    }
    EXPECT_GE(loss_tc_latent(latents, positions, nullptr).loss, 0.0);
    EXPECT_GT(loss_tc_latent(latents, positions, nullptr).loss, 1e-6);
}

TEST(TrainAutoencoder, ReconstructionLossDecreases) {
    Rng rng(41);
    std::vector<ChannelSample> dataset;
    for (int k = 0; k < 48; ++k) {
        dataset.push_back({random_channel(3, 2, rng),
                           Vec3(rng.normal(), rng.normal(), 0.0)});
    }
    AeHyper hyper;
    hyper.latent_dim = 4;
    hyper.encoder_hidden = {16};
    hyper.decoder_hidden = {16};
    hyper.lambda_tc = 0.0;
    hyper.perturb_std = 0.0;
    hyper.batch_size = 16;
    hyper.max_epochs = 40;
    hyper.plateau_patience = 40;
    hyper.seed = 5;
    AeTrainRecord record;
    train_autoencoder(dataset, hyper, &record);
    ASSERT_GT(record.epochs_run, 1);
    EXPECT_LT(record.epoch_ci.back(), record.epoch_ci.front());
}

TEST(TrainAutoencoder, DefaultWidthsAccepted) {
    // full-scale encoder [1280, 256] / decoder [256, 1280] just constructs
    AeHyper hyper;
    ASSERT_EQ(hyper.encoder_hidden, (std::vector<int>{1280, 256}));
    ASSERT_EQ(hyper.decoder_hidden, (std::vector<int>{256, 1280}));
    ASSERT_EQ(hyper.latent_dim, 64);
    ASSERT_NEAR(hyper.lambda_tc, 0.1, 1e-15);
    Rng rng(1);
    const AutoencoderModel model = make_autoencoder(800, hyper, rng);
    EXPECT_EQ(model.encoder.input_dim(), 800);
    EXPECT_EQ(model.encoder.output_dim(), 64);
    EXPECT_EQ(model.decoder.output_dim(), 800);
}

TEST(TrainAutoencoder, DeterministicPerSeed) {
    Rng rng(43);
    std::vector<ChannelSample> dataset;
    for (int k = 0; k < 24; ++k) {
        dataset.push_back({random_channel(2, 2, rng),
                           Vec3(rng.normal(), rng.normal(), 0.0)});
    }
    AeHyper hyper;
    hyper.latent_dim = 3;
    hyper.encoder_hidden = {8};
    hyper.decoder_hidden = {8};
    hyper.batch_size = 8;
    hyper.max_epochs = 5;
    hyper.seed = 17;
    const AutoencoderModel a = train_autoencoder(dataset, hyper);
    const AutoencoderModel b = train_autoencoder(dataset, hyper);
    for (std::size_t l = 0; l < a.encoder.layers().size(); ++l) {
        EXPECT_TRUE(a.encoder.layers()[l].W == b.encoder.layers()[l].W);
    }
    for (std::size_t l = 0; l < a.decoder.layers().size(); ++l) {
        EXPECT_TRUE(a.decoder.layers()[l].W == b.decoder.layers()[l].W);
    }
}

TEST(LatentSmoothness, AnchorsAtZeroAndPeaksAtOne) {
    Rng rng(47);
    const AutoencoderModel model = identity_autoencoder(8);
    std::vector<ChannelSample> trajectory;
    for (int t = 0; t < 10; ++t) {
        trajectory.push_back({random_channel(2, 2, rng), Vec3::Zero()});
    }
    const RealVector d = latent_smoothness(model, trajectory);
    ASSERT_EQ(d.size(), 10);
    EXPECT_EQ(d(0), 0.0);
    EXPECT_NEAR(d.maxCoeff(), 1.0, 1e-15);
}

TEST(LatentSmoothness, AllZeroDistancesStayZero) {
    const AutoencoderModel model = identity_autoencoder(8);
    Rng rng(53);
    const ChannelSample s{random_channel(2, 2, rng), Vec3::Zero()};
    const std::vector<ChannelSample> trajectory(5, s);
    const RealVector d = latent_smoothness(model, trajectory);
    EXPECT_EQ(d.norm(), 0.0);
}

TEST(SaveLoad, AutoencoderRoundTrip) {
    Rng rng(59);
    AeHyper hyper;
    hyper.latent_dim = 4;
    hyper.encoder_hidden = {10};
    hyper.decoder_hidden = {10};
    hyper.lambda_tc = 0.25;
    hyper.perturb_std = 0.07;
    hyper.seed = 99;
    const AutoencoderModel model = make_autoencoder(12, hyper, rng);
    const auto path = std::filesystem::temp_directory_path() / "chanest_ae_roundtrip.ckpt";
    save_autoencoder(path, model, hyper);
    const auto [loaded, loaded_hyper] = load_autoencoder(path);
    EXPECT_EQ(loaded.latent_dim, 4);
    EXPECT_NEAR(loaded_hyper.lambda_tc, 0.25, 1e-15);
    EXPECT_NEAR(loaded_hyper.perturb_std, 0.07, 1e-15);
    for (std::size_t l = 0; l < model.encoder.layers().size(); ++l) {
        EXPECT_TRUE(loaded.encoder.layers()[l].W == model.encoder.layers()[l].W);
    }
    for (std::size_t l = 0; l < model.decoder.layers().size(); ++l) {
        EXPECT_TRUE(loaded.decoder.layers()[l].W == model.decoder.layers()[l].W);
    }
    std::filesystem::remove(path);
    std::filesystem::remove(path.string() + ".json");
}
