#include "tvae/config.hpp"

#include <string>

#include "tvae/error.hpp"

namespace tvae {

void ExperimentConfig::validate() const {
  if (n_samples == 0) throw ConfigError("n-samples must be at least 1");
  if (training.batch_size == 0 || training.batch_size > n_samples) {
    throw ConfigError("batch size must lie in [1, n-samples]");
  }
  if (!(training.learning_rate > 0.0)) throw ConfigError("learning rate must be positive");
  if (training.eval_every == 0) throw ConfigError("eval-every must be positive");
  if (!(training.weight_init_scale > 0.0)) throw ConfigError("weight init scale must be positive");
  if (!(training.latent_noise >= 0.0)) throw ConfigError("latent noise must be non-negative");
  for (auto h : training.hidden) {
    if (h == 0) throw ConfigError("hidden widths must be positive");
  }
  loss.validate();
  latent.validate();
}

ExperimentConfig ExperimentConfig::preset(physics::System system) {
  ExperimentConfig c;
  c.system = system;
  switch (system) {
    case physics::System::oscillator:
      c.loss = {1.0, 1.0, 100.0, vae::ReconMode::squared_norm};
      c.latent = vae::LatentSplit::for_term(vae::TermKind::circle, 1);
      c.betti_expected = homology::BettiVector{1, 1, 0};
      break;
    case physics::System::orbit:
      c.loss = {1.0, 100.0, 100.0, vae::ReconMode::squared_norm};
      c.latent = vae::LatentSplit::for_term(vae::TermKind::lemniscate, 1);
      c.betti_expected = homology::BettiVector{1, 2, 0};
      break;
    case physics::System::qubit:
      c.loss = {1.0, 1.0, 100.0, vae::ReconMode::squared_norm};
      c.latent = vae::LatentSplit::for_term(vae::TermKind::sphere, 1);
      c.betti_expected = homology::BettiVector{1, 0, 1};
      break;
  }
  return c;
}

nlohmann::json to_json(const ExperimentConfig& cfg) {
  nlohmann::json j;
  j["system"] = std::string(physics::to_string(cfg.system));
  j["n_samples"] = cfg.n_samples;
  j["seed"] = cfg.seed;
  j["alpha"] = cfg.loss.alpha;
  j["beta"] = cfg.loss.beta;
  j["gamma"] = cfg.loss.gamma;
  j["reconstruction"] = std::string(vae::to_string(cfg.loss.recon));
  j["latent"] = {{"term", std::string(vae::to_string(cfg.latent.term.kind))},
                 {"tpv", cfg.latent.n_tpv},
                 {"gpv", cfg.latent.n_gpv},
                 {"radius", cfg.latent.term.radius},
                 {"lemniscate_c", cfg.latent.term.lemniscate_c}};
  j["training"] = {{"batch_size", cfg.training.batch_size},
                   {"learning_rate", cfg.training.learning_rate},
                   {"iterations", cfg.training.iterations},
                   {"weight_init_scale", cfg.training.weight_init_scale},
                   {"eval_every", cfg.training.eval_every},
                   {"hidden", cfg.training.hidden},
                   {"normalize", cfg.training.normalize},
                   {"latent_noise", cfg.training.latent_noise}};
  if (cfg.betti_expected) j["betti_expected"] = *cfg.betti_expected;
  return j;
}

ExperimentConfig experiment_from_json(const nlohmann::json& j) {
  try {
    ExperimentConfig c = ExperimentConfig::preset(physics::parse_system(j.at("system").get<std::string>()));
    c.n_samples = j.value("n_samples", c.n_samples);
    c.seed = j.value("seed", c.seed);
    c.loss.alpha = j.value("alpha", c.loss.alpha);
    c.loss.beta = j.value("beta", c.loss.beta);
    c.loss.gamma = j.value("gamma", c.loss.gamma);
    if (j.contains("reconstruction")) c.loss.recon = vae::parse_recon_mode(j["reconstruction"].get<std::string>());
    if (j.contains("latent")) {
      const auto& l = j["latent"];
      c.latent.term.kind = vae::parse_term(l.at("term").get<std::string>());
      c.latent.n_tpv = l.value("tpv", c.latent.term.arity());
      c.latent.n_gpv = l.value("gpv", c.latent.n_gpv);
      c.latent.term.radius = l.value("radius", c.latent.term.radius);
      c.latent.term.lemniscate_c = l.value("lemniscate_c", c.latent.term.lemniscate_c);
    }
    if (j.contains("training")) {
      const auto& t = j["training"];
      c.training.batch_size = t.value("batch_size", c.training.batch_size);
      c.training.learning_rate = t.value("learning_rate", c.training.learning_rate);
      c.training.iterations = t.value("iterations", c.training.iterations);
      c.training.weight_init_scale = t.value("weight_init_scale", c.training.weight_init_scale);
      c.training.eval_every = t.value("eval_every", c.training.eval_every);
      c.training.hidden = t.value("hidden", c.training.hidden);
      c.training.normalize = t.value("normalize", c.training.normalize);
      c.training.latent_noise = t.value("latent_noise", c.training.latent_noise);
    }
    if (j.contains("betti_expected")) {
      c.betti_expected = j["betti_expected"].get<homology::BettiVector>();
    } else {
      c.betti_expected.reset();
    }
    c.validate();
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("invalid experiment config: ") + e.what());
  }
}

}  // namespace tvae
