#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

#include "tvae/rng.hpp"

namespace tvae::nn {

enum class Activation { tanh, relu, identity };

std::string_view to_string(Activation a);
Activation parse_activation(std::string_view name);

// widths = (input, hidden..., output); one activation per affine layer.
struct MlpSpec {
  std::vector<std::size_t> widths;
  std::vector<Activation> activations;

  std::size_t layers() const { return activations.size(); }
  void validate() const;

  // Hidden layers share one activation and the output layer is identity.
  static MlpSpec uniform(std::size_t input, std::vector<std::size_t> hidden, std::size_t output, Activation hidden_act);
};

struct Layer {
  Eigen::MatrixXd weight;  // out x in
  Eigen::VectorXd bias;    // out
  Activation activation = Activation::identity;
};

struct MlpParams {
  std::vector<Layer> layers;
  // Bumped by every in-place update so stale tapes can be detected.
  std::uint64_t version = 0;

  std::size_t input_dim() const { return layers.empty() ? 0 : static_cast<std::size_t>(layers.front().weight.cols()); }
  std::size_t output_dim() const { return layers.empty() ? 0 : static_cast<std::size_t>(layers.back().weight.rows()); }
  std::size_t parameter_count() const;
  MlpSpec spec() const;
  // Throws ConfigError on incompatible shapes, NumericError on non-finite entries.
  void validate() const;

  // Weights (column-major) then bias, layer by layer.
  Eigen::VectorXd flatten() const;
  void assign(const Eigen::VectorXd& flat);
};

// Same layout as MlpParams.
struct Gradients {
  std::vector<Eigen::MatrixXd> weight;
  std::vector<Eigen::VectorXd> bias;

  static Gradients zeros_like(const MlpParams& params);
  Gradients& operator+=(const Gradients& other);
  Gradients& operator*=(double s);
  Eigen::VectorXd flatten() const;
  bool all_finite() const;
};

// Cached activations from one forward pass, consumed by exactly one backward pass.
struct Tape {
  std::vector<Eigen::MatrixXd> inputs;       // layer inputs, in x B
  std::vector<Eigen::MatrixXd> activations;  // post-activation outputs, out x B
  std::vector<Eigen::MatrixXd> pre;          // pre-activations, out x B
  const MlpParams* owner = nullptr;
  std::uint64_t version = 0;
  bool valid = false;
};

// U[-scale/sqrt(fan_in), +scale/sqrt(fan_in)] weights, zero biases.
MlpParams init_params(const MlpSpec& spec, Rng& rng, double scale = 1.0);

// Column-batched forward pass: x is input_dim x B. Records into `tape` when given.
Eigen::MatrixXd forward(const MlpParams& params, const Eigen::MatrixXd& x, Tape* tape = nullptr);
Eigen::VectorXd forward(const MlpParams& params, const Eigen::VectorXd& x);

struct BackwardResult {
  Gradients grads;              // d(sum_b <upstream_b, y_b>)/d(params)
  Eigen::MatrixXd input_grad;   // input_dim x B
};

// Exact gradients of the recorded pass. The tape is invalidated afterwards.
BackwardResult backward(const MlpParams& params, Tape& tape, const Eigen::MatrixXd& upstream);

struct AdamState {
  double learning_rate = 1e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  std::uint64_t step = 0;
  Gradients m;
  Gradients v;
};

AdamState make_adam(const MlpParams& params, double learning_rate = 1e-4);

// Bias-corrected Adam update. Throws NumericError on non-finite gradients
// and ConfigError on shape mismatch; params and state are untouched then.
void adam_step(MlpParams& params, const Gradients& grads, AdamState& state);

}  // namespace tvae::nn
