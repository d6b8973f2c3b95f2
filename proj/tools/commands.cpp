#include "commands.hpp"

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "tvae/checkpoint.hpp"
#include "tvae/config.hpp"
#include "tvae/error.hpp"
#include "tvae/homology.hpp"
#include "tvae/parallel.hpp"
#include "tvae/physics.hpp"
#include "tvae/point_cloud.hpp"
#include "tvae/training.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace tvae::cli {
namespace {

// Raised after a command has written its outputs but a metric check failed.
struct MetricFailure : Error {
  using Error::Error;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag) {
  if (flag) return *flag;
  if (const char* env = std::getenv("TVAE_SEED")) {
    try {
      std::size_t used = 0;
      const auto v = std::stoull(env, &used);
      if (used == std::string(env).size()) return v;
    } catch (const std::exception&) {
    }
    throw ConfigError(std::string("TVAE_SEED is not an unsigned integer: '") + env + "'");
  }
  return 0;
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create directory '" + dir.string() + "': " + ec.message());
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << text;
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

json read_json(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

PointCloud read_input(const fs::path& path, std::string_view what) {
  if (!fs::exists(path)) throw ConfigError(std::string(what) + " '" + path.string() + "' does not exist");
  return load_csv(path);
}

std::string abs_string(const fs::path& p) { return fs::absolute(p).lexically_normal().string(); }

// One manifest.json per output directory; each command that writes into the
// directory records itself under "commands".
void record_manifest(const fs::path& dir, const std::string& command, json record) {
  const auto path = dir / "manifest.json";
  json manifest;
  if (fs::exists(path)) {
    try {
      manifest = read_json(path);
    } catch (const Error&) {
      manifest = json::object();
    }
  }
  if (!manifest.is_object() || manifest.value("schema", std::string{}) != kManifestSchema) {
    manifest = json::object();
  }
  manifest["schema"] = std::string(kManifestSchema);
  manifest["tool_version"] = std::string(kToolVersion);
  record["tool_version"] = std::string(kToolVersion);
  manifest["commands"][command] = std::move(record);
  write_text(path, manifest.dump(2) + "\n");
}

// ---------------------------------------------------------------------------

struct GenerateArgs {
  std::string system;
  std::size_t n = 1000;
  std::optional<std::uint64_t> seed;
  std::string out;
};

int cmd_generate(const GenerateArgs& a, std::ostream& out) {
  const auto t0 = Clock::now();
  const auto system = physics::parse_system(a.system);
  const auto seed = resolve_seed(a.seed);
  const auto ds = physics::generate(system, a.n, seed);
  const fs::path dir(a.out);
  ensure_dir(dir);
  save_csv(ds.observations, dir / "data.csv");
  save_csv(ds.hidden, dir / "data.labels.csv");
  record_manifest(dir, "generate",
                  {{"config", {{"system", a.system}, {"n", a.n}}},
                   {"seed", seed},
                   {"inputs", json::object()},
                   {"outputs", {abs_string(dir / "data.csv"), abs_string(dir / "data.labels.csv")}},
                   {"duration_seconds", seconds_since(t0)}});
  out << "wrote " << ds.observations.size() << "x" << ds.observations.dim() << " observations to "
      << (dir / "data.csv").string() << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct BettiArgs {
  std::string input;
  int max_dim = 1;
  std::optional<std::size_t> landmarks;
  double lifetime_ratio = 0.15;
  double radius_ratio = 0.5;
  std::size_t max_simplices = 20'000'000;
  std::string out;
};

json barcode_json(const homology::BettiResult& r, const BettiArgs& a) {
  json intervals = json::array();
  for (const auto& iv : r.barcode.intervals) {
    intervals.push_back({{"dim", iv.dim},
                         {"birth", iv.birth},
                         {"death", iv.infinite() ? json(nullptr) : json(iv.death)}});
  }
  return {{"intervals", intervals},
          {"diameter", r.diameter},
          {"betti", r.betti},
          {"landmarks", r.landmarks},
          {"max_radius", r.max_radius},
          {"simplices", r.simplices},
          {"max_dim", a.max_dim},
          {"lifetime_ratio", a.lifetime_ratio}};
}

int cmd_betti(const BettiArgs& a, std::ostream& out) {
  const auto t0 = Clock::now();
  const auto cloud = read_input(a.input, "input");
  homology::BettiOptions opt;
  opt.max_dim = a.max_dim;
  opt.landmarks = a.landmarks;
  opt.lifetime_ratio = a.lifetime_ratio;
  opt.radius_ratio = a.radius_ratio;
  opt.max_simplices = a.max_simplices;
  const auto r = homology::compute_betti(cloud, opt);
  if (!a.out.empty()) {
    const fs::path path(a.out);
    const auto dir = path.has_parent_path() ? path.parent_path() : fs::path(".");
    ensure_dir(dir);
    write_text(path, barcode_json(r, a).dump(1) + "\n");
    record_manifest(dir, "betti",
                    {{"config",
                      {{"max_dim", a.max_dim},
                       {"landmarks", r.landmarks},
                       {"lifetime_ratio", a.lifetime_ratio},
                       {"radius_ratio", a.radius_ratio}}},
                     {"seed", nullptr},
                     {"inputs", {{"data", abs_string(a.input)}}},
                     {"outputs", {abs_string(path)}},
                     {"betti", r.betti},
                     {"duration_seconds", seconds_since(t0)}});
  }
  out << homology::format_betti(r.betti) << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct TrainArgs {
  std::string input;
  std::string config;
  std::string term;
  std::optional<std::size_t> tpv;
  std::optional<std::size_t> gpv;
  std::optional<double> alpha, beta, gamma;
  std::optional<std::size_t> iters;
  std::optional<std::size_t> batch;
  std::optional<double> lr;
  std::optional<std::size_t> eval_every;
  std::optional<double> init_scale;
  std::optional<double> latent_noise;
  std::optional<std::string> recon;
  std::vector<std::size_t> hidden;
  bool no_normalize = false;
  bool quiet = false;
  std::optional<std::uint64_t> seed;
  std::string out;
};

std::string loss_csv(const std::vector<LossRecord>& history) {
  std::string s = "iteration,total,recon,topo,gpv\n";
  for (const auto& r : history) {
    s += std::to_string(r.iteration) + "," + format_double(r.parts.total) + "," + format_double(r.parts.recon) + "," +
         format_double(r.parts.topo) + "," + format_double(r.parts.gpv) + "\n";
  }
  return s;
}

physics::System system_for_term(vae::TermKind t) {
  switch (t) {
    case vae::TermKind::circle: return physics::System::oscillator;
    case vae::TermKind::lemniscate: return physics::System::orbit;
    case vae::TermKind::sphere: return physics::System::qubit;
  }
  return physics::System::oscillator;
}

ExperimentConfig train_config(const TrainArgs& a, const PointCloud& data) {
  ExperimentConfig cfg;
  if (!a.config.empty()) {
    cfg = experiment_from_json(read_json(a.config));
  } else {
    if (a.term.empty()) throw ConfigError("--term is required unless --config is given");
    cfg = ExperimentConfig::preset(system_for_term(vae::parse_term(a.term)));
  }
  if (!a.term.empty()) {
    cfg.latent.term.kind = vae::parse_term(a.term);
    cfg.latent.n_tpv = cfg.latent.term.arity();
  }
  if (a.tpv) cfg.latent.n_tpv = *a.tpv;
  if (a.gpv) cfg.latent.n_gpv = *a.gpv;
  if (a.alpha) cfg.loss.alpha = *a.alpha;
  if (a.beta) cfg.loss.beta = *a.beta;
  if (a.gamma) cfg.loss.gamma = *a.gamma;
  if (a.recon) cfg.loss.recon = vae::parse_recon_mode(*a.recon);
  if (a.iters) cfg.training.iterations = *a.iters;
  if (a.batch) cfg.training.batch_size = *a.batch;
  if (a.lr) cfg.training.learning_rate = *a.lr;
  if (a.eval_every) cfg.training.eval_every = *a.eval_every;
  if (a.init_scale) cfg.training.weight_init_scale = *a.init_scale;
  if (a.latent_noise) cfg.training.latent_noise = *a.latent_noise;
  if (!a.hidden.empty()) cfg.training.hidden = a.hidden;
  if (a.no_normalize) cfg.training.normalize = false;
  if (a.seed || a.config.empty()) cfg.seed = resolve_seed(a.seed);
  cfg.n_samples = data.size();
  if (!data.meta().system.empty()) {
    try {
      cfg.system = physics::parse_system(data.meta().system);
    } catch (const ConfigError&) {
    }
  }
  cfg.validate();
  return cfg;
}

int cmd_train(const TrainArgs& a, std::ostream& out) {
  const auto t0 = Clock::now();
  const auto data = read_input(a.input, "input");
  const auto cfg = train_config(a, data);
  const fs::path dir(a.out);
  ensure_dir(dir);

  auto progress = [&](const LossRecord& r) {
    if (!a.quiet) {
      out << "iter " << r.iteration << " loss " << format_double(r.parts.total) << "\n";
    }
  };
  Checkpoint ckpt;
  ckpt.meta = {{"experiment", to_json(cfg)}, {"input", abs_string(a.input)}};
  std::vector<LossRecord> history;
  std::optional<std::size_t> diverged_at;
  try {
    auto result = train(cfg, data, rng_stream(cfg.seed, "train"), progress);
    ckpt.model = std::move(result.model);
    history = std::move(result.history);
  } catch (const TrainingDiverged& e) {
    ckpt.model = e.last_good();
    ckpt.meta["diverged_at"] = e.iteration();
    diverged_at = e.iteration();
  }
  save_checkpoint(ckpt, dir / "checkpoint.json");
  write_text(dir / "loss.csv", loss_csv(history));
  record_manifest(dir, "train",
                  {{"config", to_json(cfg)},
                   {"seed", cfg.seed},
                   {"inputs", {{"data", abs_string(a.input)}}},
                   {"outputs", {abs_string(dir / "checkpoint.json"), abs_string(dir / "loss.csv")}},
                   {"diverged_at", diverged_at ? json(*diverged_at) : json(nullptr)},
                   {"duration_seconds", seconds_since(t0)}});
  if (diverged_at) {
    throw MetricFailure("training diverged at iteration " + std::to_string(*diverged_at) +
                        "; last finite checkpoint written to " + (dir / "checkpoint.json").string());
  }
  out << "wrote " << (dir / "checkpoint.json").string() << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct EvalArgs {
  std::string input;
  std::string labels;
  std::string checkpoint;
  std::string out;
  EvalThresholds thresholds;
};

PointCloud latent_cloud(const Eigen::MatrixXd& latents) {
  const auto n = static_cast<std::size_t>(latents.rows());
  const auto d = static_cast<std::size_t>(latents.cols());
  std::vector<double> flat;
  flat.reserve(n * d);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < d; ++j) flat.push_back(latents(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)));
  }
  return PointCloud(d, std::move(flat), {}, default_columns("z", d));
}

int cmd_eval(const EvalArgs& a, std::ostream& out) {
  const auto t0 = Clock::now();
  const auto data = read_input(a.input, "input");
  if (!fs::exists(a.checkpoint)) throw ConfigError("checkpoint '" + a.checkpoint + "' does not exist");
  Checkpoint ckpt;
  try {
    ckpt = load_checkpoint(a.checkpoint);
  } catch (const ParseError& e) {
    throw ConfigError(e.what());
  }
  if (ckpt.model.input_dim() != data.dim()) {
    throw ConfigError("checkpoint expects " + std::to_string(ckpt.model.input_dim()) + "-dimensional observations, input has " +
                      std::to_string(data.dim()));
  }
  std::optional<PointCloud> labels;
  if (!a.labels.empty()) {
    labels = read_input(a.labels, "labels");
    if (labels->size() != data.size()) throw ConfigError("labels and input differ in row count");
  }
  const auto report = evaluate(ckpt.model, data, labels ? &*labels : nullptr, a.thresholds);

  const fs::path dir(a.out);
  ensure_dir(dir);
  auto rj = report_to_json(report, a.thresholds);
  rj["term"] = std::string(vae::to_string(ckpt.model.split.term.kind));
  write_text(dir / "report.json", rj.dump(2) + "\n");
  save_csv(latent_cloud(report.latents), dir / "latents.csv");
  record_manifest(dir, "eval",
                  {{"config", {{"thresholds", rj["thresholds"]}}},
                   {"seed", nullptr},
                   {"inputs",
                    {{"data", abs_string(a.input)},
                     {"labels", a.labels.empty() ? json(nullptr) : json(abs_string(a.labels))},
                     {"checkpoint", abs_string(a.checkpoint)}}},
                   {"outputs", {abs_string(dir / "report.json"), abs_string(dir / "latents.csv")}},
                   {"passed", report.passed()},
                   {"duration_seconds", seconds_since(t0)}});
  for (const auto& f : report.failures) out << "FAIL " << f << "\n";
  if (!report.passed()) throw MetricFailure("evaluation thresholds not met");
  out << "PASS all thresholds\n";
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct ExportArgs {
  std::string run;
  std::string out;
};

// Columns of `a` followed by columns of `b`, row by row.
PointCloud join(const PointCloud& a, const PointCloud& b, std::vector<std::size_t> a_cols = {},
                std::vector<std::size_t> b_cols = {}) {
  if (a.size() != b.size()) throw ConfigError("cannot join tables with different row counts");
  if (a_cols.empty()) {
    for (std::size_t j = 0; j < a.dim(); ++j) a_cols.push_back(j);
  }
  if (b_cols.empty()) {
    for (std::size_t j = 0; j < b.dim(); ++j) b_cols.push_back(j);
  }
  std::vector<std::string> names;
  for (auto j : a_cols) names.push_back(a.columns().at(j));
  for (auto j : b_cols) names.push_back(b.columns().at(j));
  std::vector<double> flat;
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (auto j : a_cols) flat.push_back(a.at(i, j));
    for (auto j : b_cols) flat.push_back(b.at(i, j));
  }
  const auto dim = names.size();
  return PointCloud(dim, std::move(flat), {}, std::move(names));
}

int cmd_export(const ExportArgs& a, std::ostream& out, std::ostream& err) {
  const fs::path run(a.run);
  const auto manifest_path = run / "manifest.json";
  if (!fs::exists(manifest_path) || !fs::exists(run / "latents.csv")) {
    throw ConfigError("run directory '" + run.string() + "' has no eval outputs (manifest.json, latents.csv)");
  }
  const auto manifest = read_json(manifest_path);
  if (!manifest.contains("commands") || !manifest["commands"].contains("eval")) {
    throw ConfigError("manifest in '" + run.string() + "' has no eval record");
  }
  const auto& inputs = manifest["commands"]["eval"].at("inputs");
  const auto data = read_input(inputs.at("data").get<std::string>(), "data");
  const auto ckpt = load_checkpoint(inputs.at("checkpoint").get<std::string>());
  std::optional<PointCloud> labels;
  if (!inputs.at("labels").is_null()) labels = read_input(inputs["labels"].get<std::string>(), "labels");
  const auto latents = load_csv(run / "latents.csv");
  if (latents.size() != data.size()) throw ConfigError("latents.csv and data differ in row count");

  const fs::path dir(a.out);
  ensure_dir(dir);
  std::vector<std::string> written;
  auto emit = [&](const std::string& name, const PointCloud& table) {
    save_csv(table, dir / name);
    written.push_back(abs_string(dir / name));
  };

  const auto nt = ckpt.model.split.n_tpv;
  std::vector<std::size_t> tpv_cols;
  for (std::size_t j = 0; j < nt; ++j) tpv_cols.push_back(j);

  emit("latent_scatter.csv", labels ? join(latents, *labels) : latents);
  emit("latent_vs_observation.csv", join(data, latents));
  if (labels) emit("latent_vs_hidden.csv", join(*labels, latents));

  switch (ckpt.model.split.term.kind) {
    case vae::TermKind::circle:
      if (data.dim() >= 3) {
        emit("latent_vs_x1.csv", join(data, latents, {0}, tpv_cols));
        emit("latent_vs_v.csv", join(data, latents, {2}, tpv_cols));
      }
      break;
    case vae::TermKind::lemniscate:
      if (data.dim() >= 2) {
        emit("latent_vs_x.csv", join(data, latents, {0}, tpv_cols));
        emit("latent_vs_y.csv", join(data, latents, {1}, tpv_cols));
      }
      break;
    case vae::TermKind::sphere: {
      if (!labels || labels->dim() < 2) {
        err << "no (theta, phi) labels: azimuth_compare.csv skipped\n";
        break;
      }
      std::vector<double> flat;
      std::size_t skipped = 0;
      for (std::size_t i = 0; i < latents.size(); ++i) {
        try {
          const auto [theta1, phi1] = polar_transform({latents.at(i, 0), latents.at(i, 1), latents.at(i, 2)});
          flat.insert(flat.end(), {labels->at(i, 0), labels->at(i, 1), theta1, phi1});
        } catch (const NumericError&) {
          ++skipped;
        }
      }
      if (skipped) err << skipped << " samples off the latent sphere omitted from azimuth_compare.csv\n";
      if (!flat.empty()) emit("azimuth_compare.csv", PointCloud(4, std::move(flat), {}, {"theta0", "phi0", "theta1", "phi1"}));
      break;
    }
  }
  record_manifest(dir, "export",
                  {{"config", json::object()},
                   {"seed", nullptr},
                   {"inputs", {{"run", abs_string(run)}}},
                   {"outputs", written},
                   {"duration_seconds", 0.0}});
  for (const auto& w : written) out << "wrote " << w << "\n";
  return kExitOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Topology-constrained autoencoder pipeline: generate, betti, train, eval, export"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kToolVersion));
  unsigned threads = 0;
  app.add_option("--threads", threads, "Worker threads (0 = all cores)");

  GenerateArgs ga;
  auto* gen = app.add_subcommand("generate", "Sample a toy-system dataset");
  gen->add_option("--system", ga.system, "oscillator | orbit | qubit")
      ->required()
      ->check(CLI::IsMember({"oscillator", "orbit", "qubit"}));
  gen->add_option("--n", ga.n, "Number of samples")->capture_default_str();
  gen->add_option("--seed", ga.seed, "Random seed (falls back to TVAE_SEED)");
  gen->add_option("--out", ga.out, "Output directory")->required();

  BettiArgs ba;
  auto* betti = app.add_subcommand("betti", "Infer Betti numbers by persistent homology");
  betti->add_option("--input", ba.input, "Dataset CSV")->required();
  betti->add_option("--max-dim", ba.max_dim, "Highest homology dimension")->check(CLI::IsMember({1, 2}))->capture_default_str();
  betti->add_option("--landmarks", ba.landmarks, "Farthest-point landmarks (default 400, or 150 with --max-dim 2)");
  betti->add_option("--lifetime-ratio", ba.lifetime_ratio, "Bar lifetime cutoff as a fraction of the diameter")
      ->capture_default_str();
  betti->add_option("--radius-ratio", ba.radius_ratio, "Filtration cutoff as a fraction of the diameter")
      ->capture_default_str();
  betti->add_option("--max-simplices", ba.max_simplices, "Complex size cap")->capture_default_str();
  betti->add_option("--out", ba.out, "Barcode JSON output path");

  TrainArgs ta;
  auto* tr = app.add_subcommand("train", "Train the topology-constrained autoencoder");
  tr->add_option("--input", ta.input, "Dataset CSV")->required();
  tr->add_option("--config", ta.config, "Experiment config JSON (flags override it)");
  tr->add_option("--term", ta.term, "circle | sphere | lemniscate")->check(CLI::IsMember({"circle", "sphere", "lemniscate"}));
  tr->add_option("--tpv", ta.tpv, "Topological latent count");
  tr->add_option("--gpv", ta.gpv, "Gaussian latent count");
  tr->add_option("--alpha", ta.alpha, "Reconstruction weight");
  tr->add_option("--beta", ta.beta, "Topological term weight");
  tr->add_option("--gamma", ta.gamma, "Gaussian prior weight");
  tr->add_option("--iters", ta.iters, "Training iterations");
  tr->add_option("--batch", ta.batch, "Batch size");
  tr->add_option("--lr", ta.lr, "Adam learning rate");
  tr->add_option("--eval-every", ta.eval_every, "Loss recording interval");
  tr->add_option("--init-scale", ta.init_scale, "Weight init scale");
  tr->add_option("--latent-noise", ta.latent_noise, "Std of latent noise injected during training");
  tr->add_option("--recon", ta.recon, "squared-norm | norm")->check(CLI::IsMember({"squared-norm", "norm"}));
  tr->add_option("--hidden", ta.hidden, "Hidden layer widths");
  tr->add_flag("--no-normalize", ta.no_normalize, "Feed raw observations to the network");
  tr->add_flag("--quiet", ta.quiet, "Suppress progress output");
  tr->add_option("--seed", ta.seed, "Random seed (falls back to TVAE_SEED)");
  tr->add_option("--out", ta.out, "Output directory")->required();

  EvalArgs ea;
  auto* ev = app.add_subcommand("eval", "Encode a dataset and score the latents");
  ev->add_option("--input", ea.input, "Dataset CSV")->required();
  ev->add_option("--labels", ea.labels, "Hidden-label CSV");
  ev->add_option("--checkpoint", ea.checkpoint, "Checkpoint JSON")->required();
  ev->add_option("--out", ea.out, "Output directory")->required();
  ev->add_option("--max-gpv", ea.thresholds.gpv_max_abs, "Threshold on max |z_g|")->capture_default_str();
  ev->add_option("--max-residual", ea.thresholds.manifold_residual, "Threshold on mean topological term")->capture_default_str();
  ev->add_option("--max-recon-mse", ea.thresholds.recon_mse, "Threshold on reconstruction MSE")->capture_default_str();
  ev->add_option("--min-knn-overlap", ea.thresholds.knn_overlap, "Threshold on k-NN overlap (sphere)")->capture_default_str();
  ev->add_option("--knn-k", ea.thresholds.knn_k, "Neighbours for k-NN overlap")->capture_default_str();

  ExportArgs xa;
  auto* ex = app.add_subcommand("export", "Write plot-ready tables for an evaluated run");
  ex->add_option("--run", xa.run, "Eval output directory")->required();
  ex->add_option("--out", xa.out, "Output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }
  set_default_threads(threads);

  try {
    if (*gen) return cmd_generate(ga, out);
    if (*betti) return cmd_betti(ba, out);
    if (*tr) return cmd_train(ta, out);
    if (*ev) return cmd_eval(ea, out);
    if (*ex) return cmd_export(xa, out, err);
  } catch (const MetricFailure& e) {
    err << "error: " << e.what() << "\n";
    return kExitMetric;
  } catch (const ResourceLimitError& e) {
    err << "error: " << e.what() << "\n";
    return kExitResource;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitUsage;
}

}  // namespace tvae::cli
