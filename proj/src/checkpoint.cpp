#include "tvae/checkpoint.hpp"

#include <fstream>
#include <string>

#include "tvae/error.hpp"

namespace tvae {
namespace {

using nlohmann::json;

json vector_json(const Eigen::VectorXd& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

Eigen::VectorXd vector_from(const json& j) {
  const auto values = j.get<std::vector<double>>();
  return Eigen::Map<const Eigen::VectorXd>(values.data(), static_cast<Eigen::Index>(values.size()));
}

json mlp_json(const nn::MlpParams& p) {
  json layers = json::array();
  for (const auto& l : p.layers) {
    std::vector<double> w;
    w.reserve(static_cast<std::size_t>(l.weight.size()));
    for (Eigen::Index r = 0; r < l.weight.rows(); ++r) {
      for (Eigen::Index c = 0; c < l.weight.cols(); ++c) w.push_back(l.weight(r, c));
    }
    layers.push_back({{"shape", {l.weight.rows(), l.weight.cols()}},
                      {"activation", std::string(nn::to_string(l.activation))},
                      {"weight", w},
                      {"bias", vector_json(l.bias)}});
  }
  return {{"layers", layers}};
}

nn::MlpParams mlp_from(const json& j) {
  nn::MlpParams p;
  for (const auto& lj : j.at("layers")) {
    const auto shape = lj.at("shape").get<std::vector<std::size_t>>();
    if (shape.size() != 2) throw ParseError("layer shape must have two entries");
    const auto w = lj.at("weight").get<std::vector<double>>();
    if (w.size() != shape[0] * shape[1]) throw ParseError("layer weight count does not match its shape");
    nn::Layer l;
    l.activation = nn::parse_activation(lj.at("activation").get<std::string>());
    l.weight.resize(static_cast<Eigen::Index>(shape[0]), static_cast<Eigen::Index>(shape[1]));
    for (std::size_t r = 0; r < shape[0]; ++r) {
      for (std::size_t c = 0; c < shape[1]; ++c) {
        l.weight(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = w[r * shape[1] + c];
      }
    }
    l.bias = vector_from(lj.at("bias"));
    p.layers.push_back(std::move(l));
  }
  return p;
}

}  // namespace

json checkpoint_to_json(const Checkpoint& ckpt) {
  const auto& m = ckpt.model;
  json j;
  j["magic"] = std::string(kCheckpointMagic);
  j["format_version"] = kCheckpointVersion;
  j["latent"] = {{"term", std::string(vae::to_string(m.split.term.kind))},
                 {"tpv", m.split.n_tpv},
                 {"gpv", m.split.n_gpv},
                 {"tpv_leading", true},
                 {"radius", m.split.term.radius},
                 {"lemniscate_c", m.split.term.lemniscate_c}};
  j["loss"] = {{"alpha", m.loss.alpha},
               {"beta", m.loss.beta},
               {"gamma", m.loss.gamma},
               {"reconstruction", std::string(vae::to_string(m.loss.recon))}};
  j["normalizer"] = {{"mean", vector_json(m.normalizer.mean)}, {"scale", vector_json(m.normalizer.scale)}};
  j["encoder"] = mlp_json(m.encoder);
  j["decoder"] = mlp_json(m.decoder);
  j["meta"] = ckpt.meta;
  return j;
}

Checkpoint checkpoint_from_json(const json& j) {
  try {
    if (!j.is_object() || j.value("magic", std::string{}) != kCheckpointMagic) {
      throw ParseError("not a checkpoint (missing TVAE1 magic)");
    }
    if (j.at("format_version").get<int>() > kCheckpointVersion) throw ParseError("checkpoint format is newer than supported");
    Checkpoint c;
    auto& m = c.model;
    const auto& l = j.at("latent");
    m.split.term.kind = vae::parse_term(l.at("term").get<std::string>());
    m.split.n_tpv = l.at("tpv").get<std::size_t>();
    m.split.n_gpv = l.at("gpv").get<std::size_t>();
    m.split.term.radius = l.value("radius", 1.0);
    m.split.term.lemniscate_c = l.value("lemniscate_c", 0.01);
    const auto& lo = j.at("loss");
    m.loss.alpha = lo.at("alpha").get<double>();
    m.loss.beta = lo.at("beta").get<double>();
    m.loss.gamma = lo.at("gamma").get<double>();
    m.loss.recon = vae::parse_recon_mode(lo.value("reconstruction", std::string("squared-norm")));
    m.normalizer.mean = vector_from(j.at("normalizer").at("mean"));
    m.normalizer.scale = vector_from(j.at("normalizer").at("scale"));
    m.encoder = mlp_from(j.at("encoder"));
    m.decoder = mlp_from(j.at("decoder"));
    m.validate();
    c.meta = j.value("meta", json::object());
    return c;
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed checkpoint: ") + e.what());
  } catch (const ConfigError& e) {
    throw ParseError(std::string("inconsistent checkpoint: ") + e.what());
  }
}

void save_checkpoint(const Checkpoint& ckpt, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << checkpoint_to_json(ckpt).dump(1) << '\n';
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
  return checkpoint_from_json(j);
}

}  // namespace tvae
