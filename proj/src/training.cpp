#include "tvae/training.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "tvae/parallel.hpp"

namespace tvae {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

bool finite(const vae::LossParts& p) {
  return std::isfinite(p.total) && std::isfinite(p.recon) && std::isfinite(p.topo) && std::isfinite(p.gpv);
}

}  // namespace

TrainResult train(const ExperimentConfig& config, const PointCloud& data, const Rng& rng,
                  const ProgressFn& progress) {
  config.validate();
  const auto& opt = config.training;
  const auto n = data.size();
  if (opt.batch_size > n) throw ConfigError("batch size exceeds the number of samples");

  const Eigen::MatrixXd x = vae::to_matrix(data);
  const auto normalizer = opt.normalize ? vae::Normalizer::fit(x) : vae::Normalizer::identity(data.dim());
  auto weight_rng = rng.substream("weights");
  auto batch_rng = rng.substream("batch");
  auto noise_rng = rng.substream("noise");

  TrainResult result;
  auto& model = result.model;
  model = vae::make_model(data.dim(), config.latent, config.loss, normalizer,
                          {opt.hidden, opt.weight_init_scale}, weight_rng);
  auto adam_enc = nn::make_adam(model.encoder, opt.learning_rate);
  auto adam_dec = nn::make_adam(model.decoder, opt.learning_rate);

  vae::TopoVae last_good = model;
  auto record = [&](std::size_t it) {
    const auto parts = vae::evaluate_loss(model, x);
    if (!finite(parts)) throw TrainingDiverged(it, last_good);
    result.history.push_back({it, parts});
    last_good = model;
    if (progress) progress(result.history.back());
  };
  record(0);

  std::vector<std::size_t> pool(n);
  std::iota(pool.begin(), pool.end(), std::size_t{0});
  const auto b = static_cast<Eigen::Index>(opt.batch_size);
  Eigen::MatrixXd batch(x.rows(), b);
  Eigen::MatrixXd noise;

  for (std::size_t it = 1; it <= opt.iterations; ++it) {
    batch_rng.shuffle_prefix(pool, opt.batch_size);
    for (Eigen::Index i = 0; i < b; ++i) batch.col(i) = x.col(static_cast<Eigen::Index>(pool[static_cast<std::size_t>(i)]));
    if (opt.latent_noise > 0.0) {
      noise.resize(static_cast<Eigen::Index>(config.latent.latent_dim()), b);
      for (Eigen::Index c = 0; c < b; ++c) {
        for (Eigen::Index r = 0; r < noise.rows(); ++r) noise(r, c) = opt.latent_noise * noise_rng.normal();
      }
    }
    const auto bl = vae::batch_loss(model, batch, opt.latent_noise > 0.0 ? &noise : nullptr);
    if (!finite(bl.parts)) throw TrainingDiverged(it, last_good);
    try {
      nn::adam_step(model.encoder, bl.encoder_grads, adam_enc);
      nn::adam_step(model.decoder, bl.decoder_grads, adam_dec);
    } catch (const NumericError&) {
      throw TrainingDiverged(it, last_good);
    }
    if (it % opt.eval_every == 0 || it == opt.iterations) record(it);
  }
  return result;
}

int winding_number(std::span<const double> phases, std::span<const std::array<double, 2>> latents,
                   std::array<double, 2> center, double min_radius) {
  if (phases.size() != latents.size()) throw ConfigError("phases and latents differ in length");
  if (phases.size() < 10) throw ConfigError("winding number needs at least 10 samples");
  std::vector<std::size_t> order(phases.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return phases[a] < phases[b]; });

  std::vector<double> angle(order.size());
  for (std::size_t k = 0; k < order.size(); ++k) {
    const double dx = latents[order[k]][0] - center[0];
    const double dy = latents[order[k]][1] - center[1];
    if (std::hypot(dx, dy) <= min_radius) {
      throw NumericError("latent sample lies within " + std::to_string(min_radius) +
                         " of the winding center (latents collapsed)");
    }
    angle[k] = std::atan2(dy, dx);
  }
  double total = 0.0;
  for (std::size_t k = 0; k < angle.size(); ++k) {
    double d = angle[(k + 1) % angle.size()] - angle[k];
    d = std::remainder(d, kTwoPi);  // wrap into [-pi, pi]
    total += d;
  }
  return static_cast<int>(std::lround(total / kTwoPi));
}

std::pair<double, double> polar_transform(const std::array<double, 3>& z) {
  const double r = std::sqrt(z[0] * z[0] + z[1] * z[1] + z[2] * z[2]);
  if (!(r >= 0.8 && r <= 1.2)) {
    throw NumericError("latent norm " + std::to_string(r) + " is outside [0.8, 1.2] (latents not spherical)");
  }
  const double theta = std::acos(std::clamp(z[2] / r, -1.0, 1.0));
  double phi = std::atan2(z[1], z[0]);
  if (phi < 0.0) phi += kTwoPi;
  if (phi >= kTwoPi) phi -= kTwoPi;
  return {theta, phi};
}

namespace {

std::vector<std::size_t> nearest(const Eigen::MatrixXd& m, std::size_t i, std::size_t k) {
  const auto n = static_cast<std::size_t>(m.rows());
  std::vector<std::pair<double, std::size_t>> d;
  d.reserve(n - 1);
  for (std::size_t j = 0; j < n; ++j) {
    if (j == i) continue;
    d.emplace_back((m.row(static_cast<Eigen::Index>(i)) - m.row(static_cast<Eigen::Index>(j))).squaredNorm(), j);
  }
  std::partial_sort(d.begin(), d.begin() + static_cast<std::ptrdiff_t>(k), d.end());
  std::vector<std::size_t> out(k);
  for (std::size_t t = 0; t < k; ++t) out[t] = d[t].second;
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

double knn_overlap(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, std::size_t k) {
  if (a.rows() != b.rows()) throw ConfigError("knn overlap needs the same samples in both spaces");
  const auto n = static_cast<std::size_t>(a.rows());
  if (k == 0 || k >= n) throw ConfigError("knn k must lie in [1, N - 1]");
  std::vector<double> per(n, 0.0);
  parallel_for(n, 0, [&](std::size_t i) {
    const auto na = nearest(a, i, k);
    const auto nb = nearest(b, i, k);
    std::vector<std::size_t> common;
    std::set_intersection(na.begin(), na.end(), nb.begin(), nb.end(), std::back_inserter(common));
    per[i] = static_cast<double>(common.size()) / static_cast<double>(k);
  });
  return std::accumulate(per.begin(), per.end(), 0.0) / static_cast<double>(n);
}

namespace {

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.4g", v);
  return buf;
}

// Lobe windings of a figure-eight latent curve, split at the node times.
std::vector<int> lobe_windings(const Eigen::MatrixXd& tpv, std::span<const double> times) {
  std::vector<int> out;
  for (int lobe = 0; lobe < 2; ++lobe) {
    std::vector<double> phase;
    std::vector<std::array<double, 2>> pts;
    for (std::size_t i = 0; i < times.size(); ++i) {
      const double t = std::fmod(std::fmod(times[i], kTwoPi) + kTwoPi, kTwoPi);
      const bool first = t >= kOrbitNodeTimes[0] && t < kOrbitNodeTimes[1];
      if (first != (lobe == 0)) continue;
      // Phase measured from the lobe's entry node so each lobe is one cycle.
      const double start = lobe == 0 ? kOrbitNodeTimes[0] : kOrbitNodeTimes[1];
      phase.push_back(std::fmod(t - start + kTwoPi, kTwoPi));
      pts.push_back({tpv(static_cast<Eigen::Index>(i), 0), tpv(static_cast<Eigen::Index>(i), 1)});
    }
    if (pts.size() < 10) throw ConfigError("lobe has fewer than 10 samples");
    std::array<double, 2> c{0.0, 0.0};
    for (const auto& p : pts) {
      c[0] += p[0];
      c[1] += p[1];
    }
    c[0] /= static_cast<double>(pts.size());
    c[1] /= static_cast<double>(pts.size());
    double ms = 0.0;
    for (const auto& p : pts) ms += (p[0] - c[0]) * (p[0] - c[0]) + (p[1] - c[1]) * (p[1] - c[1]);
    const double rms = std::sqrt(ms / static_cast<double>(pts.size()));
    if (rms < 1e-6) throw NumericError("lobe latents collapsed to a point");
    out.push_back(winding_number(phase, pts, c, 0.1 * rms));
  }
  return out;
}

}  // namespace

EvalReport evaluate(const vae::TopoVae& model, const PointCloud& data, const PointCloud* labels,
                    const EvalThresholds& th) {
  model.validate();
  if (labels && labels->size() != data.size()) throw ConfigError("labels and data differ in row count");
  const Eigen::MatrixXd x = vae::to_matrix(data);
  const Eigen::MatrixXd z = vae::encode(model, x);
  const Eigen::MatrixXd xhat = vae::decode(model, z);
  const auto n = x.cols();
  const auto nt = static_cast<Eigen::Index>(model.split.n_tpv);
  const auto ng = static_cast<Eigen::Index>(model.split.n_gpv);

  EvalReport r;
  r.latents = z.transpose();
  r.reconstructions = xhat.transpose();
  r.recon_mse = (x - xhat).squaredNorm() / static_cast<double>(x.size());
  if (ng > 0) {
    const auto g = z.bottomRows(ng).array().abs();
    r.gpv_max_abs = g.maxCoeff();
    r.gpv_mean_abs = g.mean();
  }
  double residual = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) residual += vae::topo_term(model.split.term, z.col(i).head(nt)).value;
  r.manifold_residual_mean = residual / static_cast<double>(n);

  const Eigen::MatrixXd tpv = r.latents.leftCols(nt);
  if (static_cast<std::size_t>(n) > th.knn_k) {
    r.knn_overlap = knn_overlap(x.transpose(), tpv, th.knn_k);
  } else {
    r.notes.push_back("too few samples for knn overlap");
  }

  if (ng > 0 && !(r.gpv_max_abs < th.gpv_max_abs)) {
    r.failures.push_back("gpv-max-abs " + fmt(r.gpv_max_abs) + " >= " + fmt(th.gpv_max_abs));
  }
  if (!(r.manifold_residual_mean < th.manifold_residual)) {
    r.failures.push_back("manifold-residual-mean " + fmt(r.manifold_residual_mean) + " >= " + fmt(th.manifold_residual));
  }
  if (!(r.recon_mse < th.recon_mse)) {
    r.failures.push_back("recon-mse " + fmt(r.recon_mse) + " >= " + fmt(th.recon_mse));
  }

  const auto kind = model.split.term.kind;
  if (kind == vae::TermKind::sphere && !(r.knn_overlap >= th.knn_overlap)) {
    r.failures.push_back("knn-overlap " + fmt(r.knn_overlap) + " < " + fmt(th.knn_overlap));
  }

  if (!labels) {
    r.notes.push_back("no labels: winding metrics omitted");
    return r;
  }
  std::vector<double> first(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) first[static_cast<std::size_t>(i)] = labels->at(static_cast<std::size_t>(i), 0);

  try {
    if (kind == vae::TermKind::circle) {
      std::vector<std::array<double, 2>> pts(static_cast<std::size_t>(n));
      for (Eigen::Index i = 0; i < n; ++i) pts[static_cast<std::size_t>(i)] = {tpv(i, 0), tpv(i, 1)};
      r.winding = winding_number(first, pts);
      if (std::abs(*r.winding) != 1) r.failures.push_back("winding " + std::to_string(*r.winding) + " is not +-1");
    } else if (kind == vae::TermKind::lemniscate) {
      r.loop_windings = lobe_windings(tpv, first);
      for (std::size_t k = 0; k < r.loop_windings.size(); ++k) {
        if (std::abs(r.loop_windings[k]) != 1) {
          r.failures.push_back("lobe " + std::to_string(k) + " winding " + std::to_string(r.loop_windings[k]) +
                               " is not +-1");
        }
      }
    }
  } catch (const Error& e) {
    r.failures.push_back(std::string("winding undefined: ") + e.what());
  }
  return r;
}

nlohmann::json report_to_json(const EvalReport& r, const EvalThresholds& th) {
  nlohmann::json j;
  j["gpv_max_abs"] = r.gpv_max_abs;
  j["gpv_mean_abs"] = r.gpv_mean_abs;
  j["manifold_residual_mean"] = r.manifold_residual_mean;
  j["recon_mse"] = r.recon_mse;
  j["winding_number"] = r.winding ? nlohmann::json(*r.winding) : nlohmann::json(nullptr);
  j["loop_windings"] = r.loop_windings;
  j["knn_overlap"] = r.knn_overlap;
  j["samples"] = r.latents.rows();
  j["passed"] = r.passed();
  j["failures"] = r.failures;
  j["notes"] = r.notes;
  j["thresholds"] = {{"gpv_max_abs", th.gpv_max_abs},
                     {"manifold_residual", th.manifold_residual},
                     {"recon_mse", th.recon_mse},
                     {"knn_overlap", th.knn_overlap},
                     {"knn_k", th.knn_k}};
  return j;
}

}  // namespace tvae
