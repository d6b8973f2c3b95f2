#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <string_view>
#include <vector>

#include "tvae/mlp.hpp"
#include "tvae/point_cloud.hpp"
#include "tvae/rng.hpp"

namespace tvae::vae {

enum class TermKind { circle, sphere, lemniscate };

std::string_view to_string(TermKind t);
TermKind parse_term(std::string_view name);

// Penalty that vanishes exactly on the target manifold of the topological
// latents:
//   circle      |z1^2 + z2^2 - r^2|
//   sphere      |z1^2 + z2^2 + z3^2 - r^2|
//   lemniscate  |(z1^2 + z2^2)^2 - c (z1^2 - z2^2)|
struct TopologicalTerm {
  TermKind kind = TermKind::circle;
  double radius = 1.0;
  double lemniscate_c = 0.01;

  std::size_t arity() const;
};

// Latent layout: topological coordinates first, then Gaussian ones.
struct LatentSplit {
  std::size_t n_tpv = 2;
  std::size_t n_gpv = 1;
  TopologicalTerm term;

  std::size_t latent_dim() const { return n_tpv + n_gpv; }
  void validate() const;

  static LatentSplit for_term(TermKind kind, std::size_t n_gpv = 1);
};

enum class ReconMode {
  squared_norm,  // |x - x^|^2
  norm,          // |x - x^|
};

std::string_view to_string(ReconMode m);
ReconMode parse_recon_mode(std::string_view name);

// L = alpha * recon + beta * T(z_t) + gamma * |z_g|^2 / 2
struct LossConfig {
  double alpha = 1.0;
  double beta = 1.0;
  double gamma = 100.0;
  ReconMode recon = ReconMode::squared_norm;

  void validate() const;
};

struct ValueGrad {
  double value = 0.0;
  Eigen::VectorXd grad;
};

// Subgradient 0 at the kink of the absolute value.
ValueGrad topo_term(const TopologicalTerm& term, const Eigen::VectorXd& z_t);

// Negative log of the standard normal density, constants dropped.
ValueGrad gpv_penalty(const Eigen::VectorXd& z_g);

struct LossParts {
  double total = 0.0;
  double recon = 0.0;  // unweighted
  double topo = 0.0;   // unweighted
  double gpv = 0.0;    // unweighted
};

struct LossResult {
  LossParts parts;
  Eigen::VectorXd grad_xhat;
  Eigen::VectorXd grad_z;
};

LossResult vae_loss(const LossConfig& cfg, const LatentSplit& split, const Eigen::VectorXd& x,
                    const Eigen::VectorXd& xhat, const Eigen::VectorXd& z);

// Per-feature affine map applied before the encoder and inverted after the
// decoder: x_n = (x - mean) / scale.
struct Normalizer {
  Eigen::VectorXd mean;
  Eigen::VectorXd scale;

  static Normalizer identity(std::size_t dim);
  // Column mean and standard deviation of `data` (features x samples).
  static Normalizer fit(const Eigen::MatrixXd& data);
};

struct TopoVae {
  LatentSplit split;
  LossConfig loss;
  Normalizer normalizer;
  nn::MlpParams encoder;  // tanh hidden layers
  nn::MlpParams decoder;  // relu hidden layers

  std::size_t input_dim() const { return encoder.input_dim(); }
  // Throws ConfigError when encoder, decoder, normalizer and split disagree.
  void validate() const;
};

struct ModelOptions {
  std::vector<std::size_t> hidden{20, 20};
  double init_scale = 1.0;
};

TopoVae make_model(std::size_t input_dim, const LatentSplit& split, const LossConfig& loss,
                   const Normalizer& normalizer, const ModelOptions& options, Rng& rng);

// Column-batched passes: x is input_dim x B, z is latent_dim x B.
Eigen::MatrixXd encode(const TopoVae& model, const Eigen::MatrixXd& x);
Eigen::MatrixXd decode(const TopoVae& model, const Eigen::MatrixXd& z);
Eigen::VectorXd encode(const TopoVae& model, const Eigen::VectorXd& x);
Eigen::VectorXd decode(const TopoVae& model, const Eigen::VectorXd& z);

// Features x samples view of a point cloud.
Eigen::MatrixXd to_matrix(const PointCloud& cloud);

struct BatchLoss {
  LossParts parts;  // means over the batch
  nn::Gradients encoder_grads;
  nn::Gradients decoder_grads;
};

// Mean loss over the columns of x and its exact gradients. `noise`, when
// non-empty, is added to the latents before decoding.
BatchLoss batch_loss(const TopoVae& model, const Eigen::MatrixXd& x, const Eigen::MatrixXd* noise = nullptr);

// Mean loss over the columns of x, no gradients.
LossParts evaluate_loss(const TopoVae& model, const Eigen::MatrixXd& x);

}  // namespace tvae::vae
