#include "tvae/mlp.hpp"

#include <cmath>
#include <string>

#include "tvae/error.hpp"

namespace tvae::nn {

std::string_view to_string(Activation a) {
  switch (a) {
    case Activation::tanh: return "tanh";
    case Activation::relu: return "relu";
    case Activation::identity: return "identity";
  }
  return "unknown";
}

Activation parse_activation(std::string_view name) {
  if (name == "tanh") return Activation::tanh;
  if (name == "relu") return Activation::relu;
  if (name == "identity") return Activation::identity;
  throw ConfigError("unknown activation '" + std::string(name) + "'");
}

void MlpSpec::validate() const {
  if (widths.size() < 2) throw ConfigError("an MLP needs at least an input and an output width");
  if (activations.size() + 1 != widths.size()) throw ConfigError("one activation per layer is required");
  for (auto w : widths) {
    if (w == 0) throw ConfigError("layer widths must be positive");
  }
}

MlpSpec MlpSpec::uniform(std::size_t input, std::vector<std::size_t> hidden, std::size_t output,
                         Activation hidden_act) {
  MlpSpec s;
  s.widths.push_back(input);
  for (auto h : hidden) {
    s.widths.push_back(h);
    s.activations.push_back(hidden_act);
  }
  s.widths.push_back(output);
  s.activations.push_back(Activation::identity);
  return s;
}

std::size_t MlpParams::parameter_count() const {
  std::size_t n = 0;
  for (const auto& l : layers) n += static_cast<std::size_t>(l.weight.size() + l.bias.size());
  return n;
}

MlpSpec MlpParams::spec() const {
  MlpSpec s;
  if (layers.empty()) return s;
  s.widths.push_back(input_dim());
  for (const auto& l : layers) {
    s.widths.push_back(static_cast<std::size_t>(l.weight.rows()));
    s.activations.push_back(l.activation);
  }
  return s;
}

void MlpParams::validate() const {
  if (layers.empty()) throw ConfigError("MLP has no layers");
  for (std::size_t i = 0; i < layers.size(); ++i) {
    const auto& l = layers[i];
    if (l.weight.rows() == 0 || l.weight.cols() == 0) throw ConfigError("zero-width layer");
    if (l.bias.size() != l.weight.rows()) throw ConfigError("bias length does not match layer " + std::to_string(i));
    if (i > 0 && l.weight.cols() != layers[i - 1].weight.rows()) {
      throw ConfigError("layer " + std::to_string(i) + " input width does not match the previous layer");
    }
    if (!l.weight.allFinite() || !l.bias.allFinite()) throw NumericError("non-finite parameter in layer " + std::to_string(i));
  }
}

Eigen::VectorXd MlpParams::flatten() const {
  Eigen::VectorXd out(static_cast<Eigen::Index>(parameter_count()));
  Eigen::Index k = 0;
  for (const auto& l : layers) {
    out.segment(k, l.weight.size()) = l.weight.reshaped();
    k += l.weight.size();
    out.segment(k, l.bias.size()) = l.bias;
    k += l.bias.size();
  }
  return out;
}

void MlpParams::assign(const Eigen::VectorXd& flat) {
  if (static_cast<std::size_t>(flat.size()) != parameter_count()) throw ConfigError("flat parameter length mismatch");
  Eigen::Index k = 0;
  for (auto& l : layers) {
    l.weight.reshaped() = flat.segment(k, l.weight.size());
    k += l.weight.size();
    l.bias = flat.segment(k, l.bias.size());
    k += l.bias.size();
  }
  ++version;
}

Gradients Gradients::zeros_like(const MlpParams& params) {
  Gradients g;
  for (const auto& l : params.layers) {
    g.weight.push_back(Eigen::MatrixXd::Zero(l.weight.rows(), l.weight.cols()));
    g.bias.push_back(Eigen::VectorXd::Zero(l.bias.size()));
  }
  return g;
}

Gradients& Gradients::operator+=(const Gradients& other) {
  if (other.weight.size() != weight.size()) throw ConfigError("gradient layout mismatch");
  for (std::size_t i = 0; i < weight.size(); ++i) {
    weight[i] += other.weight[i];
    bias[i] += other.bias[i];
  }
  return *this;
}

Gradients& Gradients::operator*=(double s) {
  for (std::size_t i = 0; i < weight.size(); ++i) {
    weight[i] *= s;
    bias[i] *= s;
  }
  return *this;
}

Eigen::VectorXd Gradients::flatten() const {
  Eigen::Index n = 0;
  for (std::size_t i = 0; i < weight.size(); ++i) n += weight[i].size() + bias[i].size();
  Eigen::VectorXd out(n);
  Eigen::Index k = 0;
  for (std::size_t i = 0; i < weight.size(); ++i) {
    out.segment(k, weight[i].size()) = weight[i].reshaped();
    k += weight[i].size();
    out.segment(k, bias[i].size()) = bias[i];
    k += bias[i].size();
  }
  return out;
}

bool Gradients::all_finite() const {
  for (std::size_t i = 0; i < weight.size(); ++i) {
    if (!weight[i].allFinite() || !bias[i].allFinite()) return false;
  }
  return true;
}

MlpParams init_params(const MlpSpec& spec, Rng& rng, double scale) {
  spec.validate();
  MlpParams p;
  for (std::size_t i = 0; i < spec.layers(); ++i) {
    const auto in = static_cast<Eigen::Index>(spec.widths[i]);
    const auto out = static_cast<Eigen::Index>(spec.widths[i + 1]);
    const double bound = scale / std::sqrt(static_cast<double>(in));
    Layer l;
    l.weight.resize(out, in);
    for (Eigen::Index r = 0; r < out; ++r) {
      for (Eigen::Index c = 0; c < in; ++c) l.weight(r, c) = rng.uniform(-bound, bound);
    }
    l.bias = Eigen::VectorXd::Zero(out);
    l.activation = spec.activations[i];
    p.layers.push_back(std::move(l));
  }
  return p;
}

namespace {

void activate(Activation a, Eigen::MatrixXd& m) {
  switch (a) {
    case Activation::tanh: m = m.array().tanh().matrix(); break;
    case Activation::relu: m = m.array().max(0.0).matrix(); break;
    case Activation::identity: break;
  }
}

// Multiplies `grad` in place by the activation derivative at `pre`/`post`.
void activation_backward(Activation a, const Eigen::MatrixXd& pre, const Eigen::MatrixXd& post,
                         Eigen::MatrixXd& grad) {
  switch (a) {
    case Activation::tanh: grad.array() *= 1.0 - post.array().square(); break;
    case Activation::relu: grad.array() *= (pre.array() > 0.0).cast<double>(); break;
    case Activation::identity: break;
  }
}

}  // namespace

Eigen::MatrixXd forward(const MlpParams& params, const Eigen::MatrixXd& x, Tape* tape) {
  if (params.layers.empty()) throw ConfigError("MLP has no layers");
  if (static_cast<std::size_t>(x.rows()) != params.input_dim()) {
    throw ConfigError("input has " + std::to_string(x.rows()) + " rows, network expects " +
                      std::to_string(params.input_dim()));
  }
  if (tape) {
    tape->inputs.clear();
    tape->activations.clear();
    tape->pre.clear();
    tape->owner = &params;
    tape->version = params.version;
    tape->valid = true;
  }
  Eigen::MatrixXd h = x;
  for (const auto& l : params.layers) {
    Eigen::MatrixXd z = l.weight * h;
    z.colwise() += l.bias;
    Eigen::MatrixXd a = z;
    activate(l.activation, a);
    if (tape) {
      tape->inputs.push_back(std::move(h));
      tape->pre.push_back(std::move(z));
      tape->activations.push_back(a);
    }
    h = std::move(a);
  }
  return h;
}

Eigen::VectorXd forward(const MlpParams& params, const Eigen::VectorXd& x) {
  Eigen::MatrixXd y = forward(params, Eigen::MatrixXd(x), nullptr);
  return y.col(0);
}

BackwardResult backward(const MlpParams& params, Tape& tape, const Eigen::MatrixXd& upstream) {
  if (!tape.valid) throw ConfigError("backward called without a fresh forward tape");
  if (tape.owner != &params || tape.version != params.version) {
    throw ConfigError("tape was recorded for different or since-updated parameters");
  }
  tape.valid = false;
  const auto& out = tape.activations.back();
  if (upstream.rows() != out.rows() || upstream.cols() != out.cols()) {
    throw ConfigError("upstream gradient shape does not match the network output");
  }
  BackwardResult r;
  r.grads = Gradients::zeros_like(params);
  Eigen::MatrixXd g = upstream;
  for (std::size_t i = params.layers.size(); i-- > 0;) {
    const auto& l = params.layers[i];
    activation_backward(l.activation, tape.pre[i], tape.activations[i], g);
    r.grads.weight[i].noalias() = g * tape.inputs[i].transpose();
    r.grads.bias[i] = g.rowwise().sum();
    g = l.weight.transpose() * g;
  }
  r.input_grad = std::move(g);
  return r;
}

AdamState make_adam(const MlpParams& params, double learning_rate) {
  if (!(learning_rate > 0.0)) throw ConfigError("learning rate must be positive");
  AdamState s;
  s.learning_rate = learning_rate;
  s.m = Gradients::zeros_like(params);
  s.v = Gradients::zeros_like(params);
  return s;
}

void adam_step(MlpParams& params, const Gradients& grads, AdamState& state) {
  if (grads.weight.size() != params.layers.size() || state.m.weight.size() != params.layers.size()) {
    throw ConfigError("gradient or optimizer state does not match the parameters");
  }
  for (std::size_t i = 0; i < params.layers.size(); ++i) {
    const auto& l = params.layers[i];
    if (grads.weight[i].rows() != l.weight.rows() || grads.weight[i].cols() != l.weight.cols() ||
        grads.bias[i].size() != l.bias.size() || state.m.weight[i].rows() != l.weight.rows() ||
        state.m.weight[i].cols() != l.weight.cols()) {
      throw ConfigError("shape mismatch in layer " + std::to_string(i));
    }
  }
  if (!grads.all_finite()) throw NumericError("non-finite gradient at Adam step " + std::to_string(state.step + 1));

  ++state.step;
  const double t = static_cast<double>(state.step);
  const double c1 = 1.0 - std::pow(state.beta1, t);
  const double c2 = 1.0 - std::pow(state.beta2, t);
  auto update = [&](auto& param, const auto& g, auto& m, auto& v) {
    m = state.beta1 * m + (1.0 - state.beta1) * g;
    v = state.beta2 * v + (1.0 - state.beta2) * g.cwiseProduct(g);
    param.array() -= state.learning_rate * (m.array() / c1) / ((v.array() / c2).sqrt() + state.epsilon);
  };
  for (std::size_t i = 0; i < params.layers.size(); ++i) {
    update(params.layers[i].weight, grads.weight[i], state.m.weight[i], state.v.weight[i]);
    update(params.layers[i].bias, grads.bias[i], state.m.bias[i], state.v.bias[i]);
  }
  ++params.version;
}

}  // namespace tvae::nn
