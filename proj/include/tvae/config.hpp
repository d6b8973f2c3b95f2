#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "json.hpp"
#include "tvae/homology.hpp"
#include "tvae/physics.hpp"
#include "tvae/topo_vae.hpp"

namespace tvae {

struct TrainingOptions {
  std::size_t batch_size = 100;
  double learning_rate = 1e-4;
  std::size_t iterations = 50'000;
  double weight_init_scale = 1.0;
  // Full-dataset loss is recorded every this many iterations (and at the end).
  std::size_t eval_every = 1'000;
  std::vector<std::size_t> hidden{20, 20};
  bool normalize = true;
  // Standard deviation of Gaussian noise added to latents before decoding.
  double latent_noise = 0.0;
};

struct ExperimentConfig {
  physics::System system = physics::System::oscillator;
  std::size_t n_samples = 1000;
  std::uint64_t seed = 0;
  vae::LossConfig loss;
  vae::LatentSplit latent;
  TrainingOptions training;
  std::optional<homology::BettiVector> betti_expected;

  // Throws ConfigError on batch_size > n_samples, negative weights, or a latent
  // layout that does not fit its term.
  void validate() const;

  // Published settings for the three toy systems.
  static ExperimentConfig preset(physics::System system);
};

nlohmann::json to_json(const ExperimentConfig& cfg);
ExperimentConfig experiment_from_json(const nlohmann::json& j);

}  // namespace tvae
