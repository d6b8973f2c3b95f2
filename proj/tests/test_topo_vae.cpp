#include <cmath>
#include <numbers>

#include "doctest.h"
#include "support.hpp"
#include "tvae/config.hpp"
#include "tvae/error.hpp"
#include "tvae/topo_vae.hpp"

using namespace tvae;
using namespace tvae::vae;

namespace {

constexpr double kPi = std::numbers::pi;

double term_value(TermKind k, std::initializer_list<double> z) {
  TopologicalTerm t{k};
  Eigen::VectorXd v(static_cast<Eigen::Index>(z.size()));
  Eigen::Index i = 0;
  for (double x : z) v[i++] = x;
  return topo_term(t, v).value;
}

}  // namespace

TEST_SUITE("topo_vae") {
  TEST_CASE("term examples") {
    CHECK(term_value(TermKind::circle, {1, 0}) == 0.0);
    CHECK(term_value(TermKind::circle, {0, 0}) == 1.0);
    CHECK(term_value(TermKind::sphere, {0, 0, 1}) == 0.0);
    CHECK(term_value(TermKind::lemniscate, {0, 0}) == 0.0);
    // (0.1^2)^2 - 0.01 * 0.1^2 at the lemniscate's tip
    CHECK(std::abs(term_value(TermKind::lemniscate, {0.1, 0})) < 1e-18);
    CHECK_THROWS_AS(topo_term(TopologicalTerm{TermKind::sphere}, Eigen::Vector2d(1, 0)), ConfigError);
  }

  TEST_CASE("terms vanish on their manifolds and are positive off them") {
    Rng rng = rng_stream(1, "manifold");
    for (int i = 0; i < 500; ++i) {
      const double t = rng.uniform(0.0, 2 * kPi);
      const double u = rng.uniform(-1.0, 1.0);
      const double s = std::sqrt(1 - u * u);
      const double bump = rng.uniform(0.05, 0.3) * (rng.uniform() < 0.5 ? -1 : 1);
      CHECK(std::abs(term_value(TermKind::circle, {std::cos(t), std::sin(t)})) < 1e-14);
      CHECK(term_value(TermKind::circle, {(1 + bump) * std::cos(t), (1 + bump) * std::sin(t)}) > 0.0);
      CHECK(std::abs(term_value(TermKind::sphere, {s * std::cos(t), s * std::sin(t), u})) < 1e-14);
      CHECK(term_value(TermKind::sphere, {(1 + bump) * s * std::cos(t), (1 + bump) * s * std::sin(t), (1 + bump) * u}) > 0.0);
      // Bernoulli lemniscate with a^2 = c
      const double a = 0.1, d = 1 + std::sin(t) * std::sin(t);
      const double lx = a * std::cos(t) / d, ly = a * std::sin(t) * std::cos(t) / d;
      CHECK(std::abs(term_value(TermKind::lemniscate, {lx, ly})) < 1e-16);
      if (std::abs(std::cos(t)) > 0.2) {
        CHECK(term_value(TermKind::lemniscate, {(1 + bump) * lx, (1 + bump) * ly}) > 0.0);
      }
    }
  }

  TEST_CASE("term gradient is zero at the kink") {
    const auto r = topo_term(TopologicalTerm{TermKind::circle}, Eigen::Vector2d(1, 0));
    CHECK(r.grad.isZero());
  }

  TEST_CASE("gpv penalty examples") {
    CHECK(gpv_penalty(Eigen::VectorXd::Zero(2)).value == 0.0);
    CHECK(gpv_penalty(Eigen::VectorXd::Ones(1)).value == 0.5);
    const auto r = gpv_penalty(Eigen::Vector2d(3, 4));
    CHECK(r.value == 12.5);
    CHECK(r.grad == Eigen::Vector2d(3, 4));
  }

  TEST_CASE("loss vanishes when every term does") {
    const auto split = LatentSplit::for_term(TermKind::circle);
    const Eigen::Vector3d x(0.5, 0.5, 0.1);
    const auto r = vae_loss(LossConfig{}, split, x, x, Eigen::Vector3d(0, 1, 0));
    CHECK(r.parts.total == 0.0);
  }

  TEST_CASE("loss combines weighted parts") {
    const auto split = LatentSplit::for_term(TermKind::circle);
    const Eigen::Vector3d x(1, 2, 3), xhat(1, 2, 5), z(0, 0, 2);
    LossConfig cfg{2.0, 3.0, 5.0};
    auto r = vae_loss(cfg, split, x, xhat, z);
    CHECK(r.parts.recon == 4.0);
    CHECK(r.parts.topo == 1.0);
    CHECK(r.parts.gpv == 2.0);
    CHECK(r.parts.total == 2.0 * 4.0 + 3.0 * 1.0 + 5.0 * 2.0);
    cfg.recon = ReconMode::norm;
    CHECK(vae_loss(cfg, split, x, xhat, z).parts.recon == 2.0);
  }

  TEST_CASE("beta = gamma = 0 leaves plain reconstruction") {
    Rng rng = rng_stream(2, "plain");
    const auto split = LatentSplit::for_term(TermKind::sphere, 2);
    for (int i = 0; i < 50; ++i) {
      const auto x = testing::random_vector(rng, 5);
      const auto xhat = testing::random_vector(rng, 5);
      const auto z = testing::random_vector(rng, 5, 3.0);
      const auto r = vae_loss(LossConfig{1.0, 0.0, 0.0}, split, x, xhat, z);
      CHECK(r.parts.total == doctest::Approx((x - xhat).squaredNorm()).epsilon(1e-14));
      CHECK(r.grad_z.isZero());
    }
  }

  TEST_CASE("loss is invariant under permuting the gaussian coordinates") {
    Rng rng = rng_stream(3, "perm");
    const auto split = LatentSplit::for_term(TermKind::circle, 3);
    const auto x = testing::random_vector(rng, 3);
    const auto xhat = testing::random_vector(rng, 3);
    Eigen::VectorXd z = testing::random_vector(rng, 5);
    const double a = vae_loss(LossConfig{}, split, x, xhat, z).parts.total;
    std::swap(z[2], z[4]);
    std::swap(z[3], z[4]);
    CHECK(vae_loss(LossConfig{}, split, x, xhat, z).parts.total == doctest::Approx(a).epsilon(1e-15));
  }

  TEST_CASE("loss length checks") {
    const auto split = LatentSplit::for_term(TermKind::circle);
    CHECK_THROWS_AS(vae_loss(LossConfig{}, split, Eigen::Vector3d::Zero(), Eigen::Vector2d::Zero(), Eigen::Vector3d::Zero()),
                    ConfigError);
    CHECK_THROWS_AS(vae_loss(LossConfig{}, split, Eigen::Vector3d::Zero(), Eigen::Vector3d::Zero(), Eigen::Vector2d::Zero()),
                    ConfigError);
    LatentSplit bad{3, 1, TopologicalTerm{TermKind::circle}};
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    CHECK_THROWS_AS((LossConfig{-1.0, 1.0, 1.0}).validate(), ConfigError);
  }

  TEST_CASE("loss gradients match central differences") {
    Rng rng = rng_stream(4, "lossfd");
    for (auto kind : {TermKind::circle, TermKind::sphere, TermKind::lemniscate}) {
      for (auto mode : {ReconMode::squared_norm, ReconMode::norm}) {
        for (int i = 0; i < 20; ++i) CHECK(testing::vae_loss_gradient_error(kind, mode, rng) < 1e-4);
      }
    }
  }

  TEST_CASE("encoder-decoder gradients match central differences") {
    Rng rng = rng_stream(5, "compfd");
    for (auto kind : {TermKind::circle, TermKind::sphere, TermKind::lemniscate}) {
      for (int i = 0; i < 20; ++i) CHECK(testing::composition_gradient_error(kind, rng) < 1e-4);
    }
  }

  TEST_CASE("published layouts and weights") {
    const auto osc = ExperimentConfig::preset(physics::System::oscillator);
    CHECK(osc.loss.alpha == 1.0);
    CHECK(osc.loss.beta == 1.0);
    CHECK(osc.loss.gamma == 100.0);
    const auto orb = ExperimentConfig::preset(physics::System::orbit);
    CHECK(orb.loss.alpha == 1.0);
    CHECK(orb.loss.beta == 100.0);
    CHECK(orb.loss.gamma == 100.0);
    const auto qub = ExperimentConfig::preset(physics::System::qubit);
    CHECK(qub.latent.n_tpv == 3);
    CHECK(qub.latent.n_gpv == 1);

    Rng rng = rng_stream(6, "shape");
    auto m3 = make_model(3, osc.latent, osc.loss, Normalizer::identity(3), {}, rng);
    const Eigen::MatrixXd x3 = Eigen::MatrixXd::Random(3, 7);
    const auto z3 = encode(m3, x3);
    CHECK(z3.rows() == 3);
    CHECK(decode(m3, z3).rows() == 3);
    auto m5 = make_model(5, qub.latent, qub.loss, Normalizer::identity(5), {}, rng);
    const Eigen::MatrixXd x5 = Eigen::MatrixXd::Random(5, 7);
    const auto z5 = encode(m5, x5);
    CHECK(z5.rows() == 4);
    const auto y5 = decode(m5, z5);
    CHECK(y5.rows() == 5);
    CHECK(y5.allFinite());
    CHECK(m5.encoder.layers[0].activation == nn::Activation::tanh);
    CHECK(m5.decoder.layers[0].activation == nn::Activation::relu);
    CHECK(m5.encoder.layers[0].weight.rows() == 20);
    CHECK(m5.encoder.layers[1].weight.rows() == 20);
    CHECK_THROWS_AS(encode(m5, x3), ConfigError);
  }

  TEST_CASE("normalizer fit standardizes columns") {
    Eigen::MatrixXd data(2, 4);
    data << 1, 2, 3, 4, 10, 10, 10, 10;
    const auto n = Normalizer::fit(data);
    CHECK(n.mean[0] == 2.5);
    CHECK(n.mean[1] == 10.0);
    CHECK(n.scale[0] == doctest::Approx(std::sqrt(1.25)));
    CHECK(n.scale[1] > 0.0);
  }
}
