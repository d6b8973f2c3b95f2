#pragma once

#include <filesystem>
#include <string_view>

#include "json.hpp"
#include "tvae/topo_vae.hpp"

namespace tvae {

// Checkpoints are JSON documents:
//
//   {
//     "magic": "TVAE1", "format_version": 1,
//     "latent": {"term": "circle", "tpv": 2, "gpv": 1, "tpv_leading": true,
//                "radius": 1.0, "lemniscate_c": 0.01},
//     "loss": {"alpha": 1, "beta": 1, "gamma": 100, "reconstruction": "squared-norm"},
//     "normalizer": {"mean": [...], "scale": [...]},
//     "encoder": {"layers": [{"shape": [out, in], "activation": "tanh",
//                             "weight": [row-major values], "bias": [...]}, ...]},
//     "decoder": {...},
//     "meta": {...}   // free-form provenance
//   }
inline constexpr std::string_view kCheckpointMagic = "TVAE1";
inline constexpr int kCheckpointVersion = 1;

struct Checkpoint {
  vae::TopoVae model;
  nlohmann::json meta = nlohmann::json::object();
};

nlohmann::json checkpoint_to_json(const Checkpoint& ckpt);
// Throws ParseError on a wrong magic string, a newer format or malformed layers.
Checkpoint checkpoint_from_json(const nlohmann::json& j);

void save_checkpoint(const Checkpoint& ckpt, const std::filesystem::path& path);
Checkpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace tvae
