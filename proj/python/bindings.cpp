#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <sstream>

#include "commands.hpp"
#include "tvae/checkpoint.hpp"
#include "tvae/config.hpp"
#include "tvae/error.hpp"
#include "tvae/homology.hpp"
#include "tvae/physics.hpp"
#include "tvae/training.hpp"

namespace py = pybind11;
using namespace tvae;

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

namespace {

PointCloud cloud_from(const RowMatrix& m) {
  std::vector<double> flat(m.data(), m.data() + m.size());
  return PointCloud(static_cast<std::size_t>(m.cols()), std::move(flat));
}

RowMatrix matrix_from(const PointCloud& c) {
  return Eigen::Map<const RowMatrix>(c.values().data(), static_cast<Eigen::Index>(c.size()),
                                     static_cast<Eigen::Index>(c.dim()));
}

py::dict betti(const RowMatrix& points, int max_dim, std::optional<std::size_t> landmarks, double lifetime_ratio,
               double radius_ratio) {
  homology::BettiOptions opt;
  opt.max_dim = max_dim;
  opt.landmarks = landmarks;
  opt.lifetime_ratio = lifetime_ratio;
  opt.radius_ratio = radius_ratio;
  const auto cloud = cloud_from(points);
  homology::BettiResult r;
  {
    py::gil_scoped_release release;
    r = homology::compute_betti(cloud, opt);
  }
  py::list intervals;
  for (const auto& iv : r.barcode.intervals) {
    intervals.append(py::make_tuple(iv.dim, iv.birth, iv.death));
  }
  py::dict d;
  d["betti"] = std::vector<int>(r.betti.begin(), r.betti.end());
  d["intervals"] = intervals;
  d["diameter"] = r.diameter;
  d["max_radius"] = r.max_radius;
  d["landmarks"] = r.landmarks;
  d["simplices"] = r.simplices;
  return d;
}

struct Model {
  vae::TopoVae vae;
  std::vector<std::pair<std::size_t, double>> history;
};

Model train_model(const RowMatrix& data, const std::string& term, std::optional<double> alpha,
                  std::optional<double> beta, std::optional<double> gamma, std::size_t n_gpv, std::size_t iterations,
                  std::size_t batch_size, double learning_rate, std::uint64_t seed, bool normalize) {
  const auto kind = vae::parse_term(term);
  physics::System system = physics::System::oscillator;
  if (kind == vae::TermKind::lemniscate) system = physics::System::orbit;
  if (kind == vae::TermKind::sphere) system = physics::System::qubit;
  auto cfg = ExperimentConfig::preset(system);
  if (alpha) cfg.loss.alpha = *alpha;
  if (beta) cfg.loss.beta = *beta;
  if (gamma) cfg.loss.gamma = *gamma;
  cfg.latent.n_gpv = n_gpv;
  cfg.training.iterations = iterations;
  cfg.training.batch_size = batch_size;
  cfg.training.learning_rate = learning_rate;
  cfg.training.normalize = normalize;
  cfg.seed = seed;
  const auto cloud = cloud_from(data);
  cfg.n_samples = cloud.size();
  TrainResult r;
  {
    py::gil_scoped_release release;
    r = train(cfg, cloud, rng_stream(seed, "train"));
  }
  Model m{std::move(r.model), {}};
  for (const auto& rec : r.history) m.history.emplace_back(rec.iteration, rec.parts.total);
  return m;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Topology-constrained autoencoder core";

  // Translators run newest first, so subclasses are registered after the base.
  auto base = py::register_exception<Error>(m, "Error");
  py::register_exception<ConfigError>(m, "ConfigError", base);
  py::register_exception<ParseError>(m, "ParseError", base);
  py::register_exception<ResourceLimitError>(m, "ResourceLimitError", base);
  py::register_exception<NumericError>(m, "NumericError", base);
  py::register_exception<IoError>(m, "IoError", base);

  m.def(
      "generate",
      [](const std::string& system, std::size_t n, std::uint64_t seed) {
        const auto ds = physics::generate(physics::parse_system(system), n, seed);
        return py::make_tuple(matrix_from(ds.observations), matrix_from(ds.hidden));
      },
      py::arg("system"), py::arg("n") = 1000, py::arg("seed") = 0,
      "Sample (observations, hidden labels) for oscillator, orbit or qubit.");

  m.def("betti", &betti, py::arg("points"), py::arg("max_dim") = 1, py::arg("landmarks") = py::none(),
        py::arg("lifetime_ratio") = 0.15, py::arg("radius_ratio") = 0.5,
        "Rips persistence of a point cloud (rows are points) and the inferred Betti numbers.");

  m.def(
      "load_csv", [](const std::filesystem::path& p) { return matrix_from(load_csv(p)); }, py::arg("path"));

  py::class_<Model>(m, "Model")
      .def_property_readonly("term", [](const Model& s) { return std::string(vae::to_string(s.vae.split.term.kind)); })
      .def_property_readonly("latent_dim", [](const Model& s) { return s.vae.split.latent_dim(); })
      .def_property_readonly("input_dim", [](const Model& s) { return s.vae.input_dim(); })
      .def_readonly("history", &Model::history)
      .def("encode", [](const Model& s, const RowMatrix& x) -> RowMatrix {
        return vae::encode(s.vae, Eigen::MatrixXd(x.transpose())).transpose();
      })
      .def("decode", [](const Model& s, const RowMatrix& z) -> RowMatrix {
        return vae::decode(s.vae, Eigen::MatrixXd(z.transpose())).transpose();
      })
      .def(
          "evaluate",
          [](const Model& s, const RowMatrix& x, std::optional<RowMatrix> labels) {
            const auto data = cloud_from(x);
            std::optional<PointCloud> lab;
            if (labels) lab = cloud_from(*labels);
            const auto report = evaluate(s.vae, data, lab ? &*lab : nullptr);
            return py::module_::import("json").attr("loads")(report_to_json(report, {}).dump());
          },
          py::arg("x"), py::arg("labels") = py::none())
      .def("save", [](const Model& s, const std::filesystem::path& p) { save_checkpoint({s.vae, {}}, p); })
      .def_static("load", [](const std::filesystem::path& p) { return Model{load_checkpoint(p).model, {}}; });

  m.def("train", &train_model, py::arg("data"), py::arg("term"), py::arg("alpha") = py::none(),
        py::arg("beta") = py::none(), py::arg("gamma") = py::none(), py::arg("n_gpv") = 1,
        py::arg("iterations") = 50000, py::arg("batch_size") = 100, py::arg("learning_rate") = 1e-4,
        py::arg("seed") = 0, py::arg("normalize") = true,
        "Train the autoencoder with the term's published loss weights unless overridden.");

  m.def(
      "winding_number",
      [](const std::vector<double>& phases, const std::vector<std::array<double, 2>>& latents, double min_radius) {
        return winding_number(phases, latents, {0.0, 0.0}, min_radius);
      },
      py::arg("phases"), py::arg("latents"), py::arg("min_radius") = 0.1);
  m.def("polar_transform", &polar_transform, py::arg("z"));
  m.def(
      "knn_overlap", [](const RowMatrix& a, const RowMatrix& b, std::size_t k) { return knn_overlap(a, b, k); },
      py::arg("a"), py::arg("b"), py::arg("k") = 10);

  m.def(
      "run_cli",
      [](const std::vector<std::string>& args) {
        std::vector<const char*> argv{"tvae"};
        for (const auto& a : args) argv.push_back(a.c_str());
        std::ostringstream out, err;
        int code;
        {
          py::gil_scoped_release release;
          code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
        }
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"), "Run the command-line tool in-process; returns (exit code, stdout, stderr).");
}
