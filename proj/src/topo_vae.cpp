#include "tvae/topo_vae.hpp"

#include <cmath>
#include <string>

#include "tvae/error.hpp"

namespace tvae::vae {

std::string_view to_string(TermKind t) {
  switch (t) {
    case TermKind::circle: return "circle";
    case TermKind::sphere: return "sphere";
    case TermKind::lemniscate: return "lemniscate";
  }
  return "unknown";
}

TermKind parse_term(std::string_view name) {
  if (name == "circle") return TermKind::circle;
  if (name == "sphere") return TermKind::sphere;
  if (name == "lemniscate") return TermKind::lemniscate;
  throw ConfigError("unknown topological term '" + std::string(name) + "' (expected circle, sphere or lemniscate)");
}

std::size_t TopologicalTerm::arity() const { return kind == TermKind::sphere ? 3 : 2; }

void LatentSplit::validate() const {
  if (n_tpv != term.arity()) {
    throw ConfigError("term '" + std::string(to_string(term.kind)) + "' needs " + std::to_string(term.arity()) +
                      " topological latents, got " + std::to_string(n_tpv));
  }
  if (!(term.radius > 0.0)) throw ConfigError("term radius must be positive");
  if (!(term.lemniscate_c > 0.0)) throw ConfigError("lemniscate constant must be positive");
}

LatentSplit LatentSplit::for_term(TermKind kind, std::size_t n_gpv) {
  LatentSplit s;
  s.term.kind = kind;
  s.n_tpv = s.term.arity();
  s.n_gpv = n_gpv;
  return s;
}

std::string_view to_string(ReconMode m) { return m == ReconMode::norm ? "norm" : "squared-norm"; }

ReconMode parse_recon_mode(std::string_view name) {
  if (name == "squared-norm") return ReconMode::squared_norm;
  if (name == "norm") return ReconMode::norm;
  throw ConfigError("unknown reconstruction mode '" + std::string(name) + "'");
}

void LossConfig::validate() const {
  if (!(alpha >= 0.0) || !(beta >= 0.0) || !(gamma >= 0.0)) {
    throw ConfigError("loss weights alpha, beta, gamma must be non-negative");
  }
}

namespace {
double sign(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }
}  // namespace

ValueGrad topo_term(const TopologicalTerm& term, const Eigen::VectorXd& z_t) {
  if (static_cast<std::size_t>(z_t.size()) != term.arity()) {
    throw ConfigError("term '" + std::string(to_string(term.kind)) + "' expects " + std::to_string(term.arity()) +
                      " coordinates, got " + std::to_string(z_t.size()));
  }
  ValueGrad r;
  if (term.kind == TermKind::lemniscate) {
    const double a = z_t[0] * z_t[0];
    const double b = z_t[1] * z_t[1];
    const double s = a + b;
    const double inner = s * s - term.lemniscate_c * (a - b);
    const double sg = sign(inner);
    r.value = std::abs(inner);
    r.grad.resize(2);
    r.grad[0] = sg * (4.0 * s * z_t[0] - 2.0 * term.lemniscate_c * z_t[0]);
    r.grad[1] = sg * (4.0 * s * z_t[1] + 2.0 * term.lemniscate_c * z_t[1]);
    return r;
  }
  const double inner = z_t.squaredNorm() - term.radius * term.radius;
  r.value = std::abs(inner);
  r.grad = 2.0 * sign(inner) * z_t;
  return r;
}

ValueGrad gpv_penalty(const Eigen::VectorXd& z_g) { return {0.5 * z_g.squaredNorm(), z_g}; }

LossResult vae_loss(const LossConfig& cfg, const LatentSplit& split, const Eigen::VectorXd& x,
                    const Eigen::VectorXd& xhat, const Eigen::VectorXd& z) {
  if (x.size() != xhat.size()) throw ConfigError("x and reconstruction differ in length");
  if (static_cast<std::size_t>(z.size()) != split.latent_dim()) {
    throw ConfigError("latent vector has length " + std::to_string(z.size()) + ", layout expects " +
                      std::to_string(split.latent_dim()));
  }
  const auto nt = static_cast<Eigen::Index>(split.n_tpv);
  const auto ng = static_cast<Eigen::Index>(split.n_gpv);

  LossResult r;
  const Eigen::VectorXd diff = xhat - x;
  if (cfg.recon == ReconMode::squared_norm) {
    r.parts.recon = diff.squaredNorm();
    r.grad_xhat = cfg.alpha * 2.0 * diff;
  } else {
    const double n = diff.norm();
    r.parts.recon = n;
    r.grad_xhat = n > 0.0 ? Eigen::VectorXd(cfg.alpha * diff / n) : Eigen::VectorXd::Zero(diff.size());
  }

  const auto topo = topo_term(split.term, z.head(nt));
  const auto gpv = gpv_penalty(z.tail(ng));
  r.parts.topo = topo.value;
  r.parts.gpv = gpv.value;
  r.parts.total = cfg.alpha * r.parts.recon + cfg.beta * r.parts.topo + cfg.gamma * r.parts.gpv;

  r.grad_z.resize(z.size());
  r.grad_z.head(nt) = cfg.beta * topo.grad;
  r.grad_z.tail(ng) = cfg.gamma * gpv.grad;
  return r;
}

Normalizer Normalizer::identity(std::size_t dim) {
  const auto d = static_cast<Eigen::Index>(dim);
  return {Eigen::VectorXd::Zero(d), Eigen::VectorXd::Ones(d)};
}

Normalizer Normalizer::fit(const Eigen::MatrixXd& data) {
  Normalizer n;
  const double count = static_cast<double>(data.cols());
  n.mean = data.rowwise().sum() / count;
  const Eigen::MatrixXd centered = data.colwise() - n.mean;
  n.scale = (centered.array().square().rowwise().sum() / count).sqrt().matrix();
  for (Eigen::Index i = 0; i < n.scale.size(); ++i) {
    if (!(n.scale[i] > 1e-12)) n.scale[i] = 1.0;  // constant feature
  }
  return n;
}

void TopoVae::validate() const {
  split.validate();
  loss.validate();
  encoder.validate();
  decoder.validate();
  const auto m = encoder.input_dim();
  if (encoder.output_dim() != split.latent_dim()) throw ConfigError("encoder output does not match the latent layout");
  if (decoder.input_dim() != split.latent_dim()) throw ConfigError("decoder input does not match the latent layout");
  if (decoder.output_dim() != m) throw ConfigError("decoder output does not match the observation dimension");
  if (static_cast<std::size_t>(normalizer.mean.size()) != m || static_cast<std::size_t>(normalizer.scale.size()) != m) {
    throw ConfigError("normalizer does not match the observation dimension");
  }
}

TopoVae make_model(std::size_t input_dim, const LatentSplit& split, const LossConfig& loss,
                   const Normalizer& normalizer, const ModelOptions& options, Rng& rng) {
  split.validate();
  loss.validate();
  TopoVae m;
  m.split = split;
  m.loss = loss;
  m.normalizer = normalizer;
  auto enc_rng = rng.substream("encoder");
  auto dec_rng = rng.substream("decoder");
  m.encoder = nn::init_params(nn::MlpSpec::uniform(input_dim, options.hidden, split.latent_dim(), nn::Activation::tanh),
                              enc_rng, options.init_scale);
  m.decoder = nn::init_params(nn::MlpSpec::uniform(split.latent_dim(), options.hidden, input_dim, nn::Activation::relu),
                              dec_rng, options.init_scale);
  m.validate();
  return m;
}

namespace {

Eigen::MatrixXd normalize(const TopoVae& model, const Eigen::MatrixXd& x) {
  if (static_cast<std::size_t>(x.rows()) != model.input_dim()) {
    throw ConfigError("observations have " + std::to_string(x.rows()) + " features, model expects " +
                      std::to_string(model.input_dim()));
  }
  return (x.colwise() - model.normalizer.mean).array().colwise() / model.normalizer.scale.array();
}

Eigen::MatrixXd denormalize(const TopoVae& model, const Eigen::MatrixXd& y) {
  return (y.array().colwise() * model.normalizer.scale.array()).matrix().colwise() + model.normalizer.mean;
}

}  // namespace

Eigen::MatrixXd encode(const TopoVae& model, const Eigen::MatrixXd& x) {
  return nn::forward(model.encoder, normalize(model, x));
}

Eigen::MatrixXd decode(const TopoVae& model, const Eigen::MatrixXd& z) {
  if (static_cast<std::size_t>(z.rows()) != model.split.latent_dim()) {
    throw ConfigError("latents have " + std::to_string(z.rows()) + " rows, model expects " +
                      std::to_string(model.split.latent_dim()));
  }
  return denormalize(model, nn::forward(model.decoder, z));
}

Eigen::VectorXd encode(const TopoVae& model, const Eigen::VectorXd& x) {
  return encode(model, Eigen::MatrixXd(x)).col(0);
}

Eigen::VectorXd decode(const TopoVae& model, const Eigen::VectorXd& z) {
  return decode(model, Eigen::MatrixXd(z)).col(0);
}

Eigen::MatrixXd to_matrix(const PointCloud& cloud) {
  Eigen::MatrixXd m(static_cast<Eigen::Index>(cloud.dim()), static_cast<Eigen::Index>(cloud.size()));
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    for (std::size_t j = 0; j < cloud.dim(); ++j) {
      m(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = cloud.at(i, j);
    }
  }
  return m;
}

BatchLoss batch_loss(const TopoVae& model, const Eigen::MatrixXd& x, const Eigen::MatrixXd* noise) {
  const auto b = x.cols();
  if (b == 0) throw ConfigError("empty batch");
  nn::Tape enc_tape, dec_tape;
  const Eigen::MatrixXd z = nn::forward(model.encoder, normalize(model, x), &enc_tape);
  Eigen::MatrixXd z_dec = z;
  if (noise && noise->size() > 0) {
    if (noise->rows() != z.rows() || noise->cols() != z.cols()) throw ConfigError("noise shape mismatch");
    z_dec += *noise;
  }
  const Eigen::MatrixXd y = nn::forward(model.decoder, z_dec, &dec_tape);
  const Eigen::MatrixXd xhat = denormalize(model, y);

  // Per-sample losses summed in ascending sample order.
  BatchLoss out;
  Eigen::MatrixXd g_xhat(xhat.rows(), b), g_z(z.rows(), b);
  for (Eigen::Index i = 0; i < b; ++i) {
    const auto r = vae_loss(model.loss, model.split, x.col(i), xhat.col(i), z.col(i));
    out.parts.total += r.parts.total;
    out.parts.recon += r.parts.recon;
    out.parts.topo += r.parts.topo;
    out.parts.gpv += r.parts.gpv;
    g_xhat.col(i) = r.grad_xhat;
    g_z.col(i) = r.grad_z;
  }
  const double inv = 1.0 / static_cast<double>(b);
  out.parts.total *= inv;
  out.parts.recon *= inv;
  out.parts.topo *= inv;
  out.parts.gpv *= inv;
  g_xhat *= inv;
  g_z *= inv;

  // x^ = mean + scale * y
  const Eigen::MatrixXd g_y = g_xhat.array().colwise() * model.normalizer.scale.array();
  auto dec = nn::backward(model.decoder, dec_tape, g_y);
  const Eigen::MatrixXd g_z_total = g_z + dec.input_grad;
  auto enc = nn::backward(model.encoder, enc_tape, g_z_total);
  out.encoder_grads = std::move(enc.grads);
  out.decoder_grads = std::move(dec.grads);
  return out;
}

LossParts evaluate_loss(const TopoVae& model, const Eigen::MatrixXd& x) {
  const Eigen::MatrixXd z = encode(model, x);
  const Eigen::MatrixXd xhat = decode(model, z);
  LossParts p;
  for (Eigen::Index i = 0; i < x.cols(); ++i) {
    const auto r = vae_loss(model.loss, model.split, x.col(i), xhat.col(i), z.col(i));
    p.total += r.parts.total;
    p.recon += r.parts.recon;
    p.topo += r.parts.topo;
    p.gpv += r.parts.gpv;
  }
  const double inv = 1.0 / static_cast<double>(x.cols());
  p.total *= inv;
  p.recon *= inv;
  p.topo *= inv;
  p.gpv *= inv;
  return p;
}

}  // namespace tvae::vae
