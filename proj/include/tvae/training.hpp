#pragma once

#include <Eigen/Dense>
#include <array>
#include <cstddef>
#include <functional>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "tvae/checkpoint.hpp"
#include "tvae/config.hpp"
#include "tvae/error.hpp"
#include "tvae/point_cloud.hpp"
#include "tvae/rng.hpp"
#include "tvae/topo_vae.hpp"

namespace tvae {

struct LossRecord {
  std::size_t iteration = 0;
  vae::LossParts parts;
};

struct TrainResult {
  vae::TopoVae model;
  // Full-dataset loss at iteration 0, every eval_every iterations, and at the end.
  std::vector<LossRecord> history;
};

// Raised when the loss or a gradient turns non-finite. Carries the model from
// the last finite loss record.
class TrainingDiverged : public NumericError {
 public:
  TrainingDiverged(std::size_t iteration, vae::TopoVae last_good)
      : NumericError("training diverged at iteration " + std::to_string(iteration)),
        iteration_(iteration),
        last_good_(std::move(last_good)) {}

  std::size_t iteration() const { return iteration_; }
  const vae::TopoVae& last_good() const { return last_good_; }

 private:
  std::size_t iteration_;
  vae::TopoVae last_good_;
};

using ProgressFn = std::function<void(const LossRecord&)>;

// Adam over uniformly drawn minibatches (without replacement within a batch).
// Weights come from rng.substream("weights"), batches from "batch", latent
// noise from "noise"; identical inputs give identical histories.
TrainResult train(const ExperimentConfig& config, const PointCloud& data, const Rng& rng,
                  const ProgressFn& progress = {});

// Sums wrapped increments of atan2 around `center` over samples sorted by
// their true phase, closing the cycle, and rounds the total turns. Throws
// ConfigError for fewer than 10 samples and NumericError when a latent lies
// within min_radius of the center.
int winding_number(std::span<const double> phases, std::span<const std::array<double, 2>> latents,
                   std::array<double, 2> center = {0.0, 0.0}, double min_radius = 0.1);

// theta = arccos(z3/|z|) in [0, pi], phi = atan2(z2, z1) in [0, 2 pi).
// Throws NumericError unless 0.8 <= |z| <= 1.2.
std::pair<double, double> polar_transform(const std::array<double, 3>& z);

// Mean fraction of each row's k nearest neighbours in `a` that are also among
// its k nearest neighbours in `b`. Rows are samples.
double knn_overlap(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, std::size_t k = 10);

struct EvalThresholds {
  double gpv_max_abs = 0.05;
  double manifold_residual = 0.05;
  double recon_mse = 1e-2;
  double knn_overlap = 0.6;
  std::size_t knn_k = 10;
};

struct EvalReport {
  double gpv_max_abs = 0.0;
  double gpv_mean_abs = 0.0;
  double manifold_residual_mean = 0.0;
  double recon_mse = 0.0;
  // Circle term: winding of the latent angle over one cycle of the true phase.
  std::optional<int> winding;
  // Lemniscate term: winding of each lobe about its own centroid.
  std::vector<int> loop_windings;
  double knn_overlap = 0.0;
  Eigen::MatrixXd latents;  // samples x latent_dim
  Eigen::MatrixXd reconstructions;  // samples x input_dim
  std::vector<std::string> failures;
  std::vector<std::string> notes;

  bool passed() const { return failures.empty(); }
};

// Hidden labels are the generator's ground truth: phase (circle), orbit time
// (lemniscate), or (theta, phi) (sphere). Without labels the winding metrics
// are omitted and the rest still computed.
EvalReport evaluate(const vae::TopoVae& model, const PointCloud& data, const PointCloud* labels,
                    const EvalThresholds& thresholds = {});

nlohmann::json report_to_json(const EvalReport& report, const EvalThresholds& thresholds);

// Orbit parameters where the relative trajectory crosses itself.
inline constexpr std::array<double, 2> kOrbitNodeTimes = {std::numbers::pi / 6.0, 5.0 * std::numbers::pi / 6.0};

}  // namespace tvae
