#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "commands.hpp"
#include "tvae/rng.hpp"
#include "tvae/topo_vae.hpp"

namespace tvae::testing {

// Central differences of f at x, one coordinate at a time.
inline Eigen::VectorXd numeric_gradient(const std::function<double(const Eigen::VectorXd&)>& f, Eigen::VectorXd x,
                                        double h = 1e-5) {
  Eigen::VectorXd g(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double xi = x[i];
    x[i] = xi + h;
    const double fp = f(x);
    x[i] = xi - h;
    const double fm = f(x);
    x[i] = xi;
    g[i] = (fp - fm) / (2.0 * h);
  }
  return g;
}

// Largest coordinate-wise relative error; coordinates whose magnitude is below
// `floor` are compared against the floor instead.
inline double max_relative_error(const Eigen::VectorXd& analytic, const Eigen::VectorXd& numeric, double floor = 1e-6) {
  double worst = 0.0;
  for (Eigen::Index i = 0; i < analytic.size(); ++i) {
    const double scale = std::max({std::abs(analytic[i]), std::abs(numeric[i]), floor});
    worst = std::max(worst, std::abs(analytic[i] - numeric[i]) / scale);
  }
  return worst;
}

inline Eigen::VectorXd random_vector(Rng& rng, Eigen::Index n, double scale = 1.0) {
  Eigen::VectorXd v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = rng.uniform(-scale, scale);
  return v;
}

// Relative error of vae_loss's analytic gradients (w.r.t. x^ and z) at one
// random configuration.
inline double vae_loss_gradient_error(vae::TermKind kind, vae::ReconMode mode, Rng& rng) {
  const auto split = vae::LatentSplit::for_term(kind, 1 + rng.uniform_index(2));
  vae::LossConfig cfg{rng.uniform(0.1, 2.0), rng.uniform(0.1, 2.0), rng.uniform(0.1, 2.0), mode};
  const auto m = static_cast<Eigen::Index>(2 + rng.uniform_index(4));
  const Eigen::VectorXd x = random_vector(rng, m);
  const Eigen::VectorXd xhat = random_vector(rng, m);
  const Eigen::VectorXd z = random_vector(rng, static_cast<Eigen::Index>(split.latent_dim()), 1.5);
  const auto r = vae::vae_loss(cfg, split, x, xhat, z);
  const auto num_xhat = numeric_gradient(
      [&](const Eigen::VectorXd& v) { return vae::vae_loss(cfg, split, x, v, z).parts.total; }, xhat);
  const auto num_z = numeric_gradient(
      [&](const Eigen::VectorXd& v) { return vae::vae_loss(cfg, split, x, xhat, v).parts.total; }, z);
  return std::max(max_relative_error(r.grad_xhat, num_xhat), max_relative_error(r.grad_z, num_z));
}

// Relative error of batch_loss's parameter gradients through the whole
// normalize-encode-decode-denormalize composition.
inline double composition_gradient_error(vae::TermKind kind, Rng& rng) {
  const auto split = vae::LatentSplit::for_term(kind, 1);
  const auto input = static_cast<Eigen::Index>(3 + rng.uniform_index(3));
  vae::Normalizer norm{random_vector(rng, input, 0.5), (random_vector(rng, input, 0.5).array() + 1.0).matrix()};
  vae::ModelOptions opts{{4, 5}, 1.0};
  vae::LossConfig loss{1.0, rng.uniform(0.5, 2.0), rng.uniform(0.5, 2.0)};
  auto model = vae::make_model(static_cast<std::size_t>(input), split, loss, norm, opts, rng);
  for (auto* net : {&model.encoder, &model.decoder}) {
    for (auto& l : net->layers) l.bias = random_vector(rng, l.bias.size(), 0.5);
  }
  Eigen::MatrixXd x(input, 4);
  for (Eigen::Index j = 0; j < x.cols(); ++j) x.col(j) = random_vector(rng, input);

  const auto bl = vae::batch_loss(model, x);
  const auto ne = static_cast<Eigen::Index>(model.encoder.parameter_count());
  Eigen::VectorXd theta(ne + static_cast<Eigen::Index>(model.decoder.parameter_count()));
  theta << model.encoder.flatten(), model.decoder.flatten();
  Eigen::VectorXd analytic(theta.size());
  analytic << bl.encoder_grads.flatten(), bl.decoder_grads.flatten();

  auto f = [&](const Eigen::VectorXd& t) {
    auto m = model;
    m.encoder.assign(t.head(ne));
    m.decoder.assign(t.tail(t.size() - ne));
    return vae::evaluate_loss(m, x).total;
  };
  return max_relative_error(analytic, numeric_gradient(f, theta));
}

struct CliResult {
  int code = 0;
  std::string out;
  std::string err;
};

inline CliResult run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "tvae");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  CliResult r;
  r.code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

inline std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace tvae::testing
