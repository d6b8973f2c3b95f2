#include <cstdlib>
#include <filesystem>

#include "doctest.h"
#include "json.hpp"
#include "support.hpp"
#include "tvae/point_cloud.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using tvae::testing::run_cli;
using tvae::testing::slurp;

namespace {

fs::path scratch(const std::string& name) {
  const char* env = std::getenv("TVAE_SCRATCH");
  const fs::path root = env ? fs::path(env) : fs::temp_directory_path() / "tvae_cli_tests";
  const auto dir = root / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string s(const fs::path& p) { return p.string(); }

json manifest(const fs::path& dir) { return json::parse(slurp(dir / "manifest.json")); }

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("generate writes observations, labels and a manifest") {
    const auto dir = scratch("gen");
    auto r = run_cli({"generate", "--system", "oscillator", "--n", "1000", "--seed", "7", "--out", s(dir / "osc")});
    REQUIRE(r.code == 0);
    const auto obs = tvae::load_csv(dir / "osc" / "data.csv");
    CHECK(obs.size() == 1000);
    CHECK(obs.dim() == 3);
    CHECK(tvae::load_csv(dir / "osc" / "data.labels.csv").dim() == 1);
    const auto m = manifest(dir / "osc");
    CHECK(m.at("schema") == "tvae-manifest/1");
    CHECK(m.at("commands").at("generate").at("seed") == 7);
    CHECK(m.at("commands").at("generate").contains("duration_seconds"));

    r = run_cli({"generate", "--system", "qubit", "--n", "1000", "--seed", "7", "--out", s(dir / "qub")});
    REQUIRE(r.code == 0);
    CHECK(tvae::load_csv(dir / "qub" / "data.csv").dim() == 5);
  }

  TEST_CASE("generate is idempotent and honours TVAE_SEED") {
    const auto dir = scratch("idem");
    REQUIRE(run_cli({"generate", "--system", "orbit", "--n", "200", "--seed", "11", "--out", s(dir / "a")}).code == 0);
    REQUIRE(run_cli({"generate", "--system", "orbit", "--n", "200", "--seed", "11", "--out", s(dir / "a2")}).code == 0);
    CHECK(slurp(dir / "a" / "data.csv") == slurp(dir / "a2" / "data.csv"));
    ::setenv("TVAE_SEED", "11", 1);
    REQUIRE(run_cli({"generate", "--system", "orbit", "--n", "200", "--out", s(dir / "b")}).code == 0);
    ::setenv("TVAE_SEED", "banana", 1);
    CHECK(run_cli({"generate", "--system", "orbit", "--n", "200", "--out", s(dir / "c")}).code == 2);
    ::unsetenv("TVAE_SEED");
    CHECK(slurp(dir / "a" / "data.csv") == slurp(dir / "b" / "data.csv"));
  }

  TEST_CASE("generate usage errors exit 2") {
    const auto dir = scratch("generr");
    CHECK(run_cli({"generate", "--system", "oscillator", "--n", "0", "--out", s(dir)}).code == 2);
    CHECK(run_cli({"generate", "--system", "pendulum", "--out", s(dir)}).code == 2);
    CHECK(run_cli({"generate", "--system", "orbit"}).code == 2);
    CHECK(run_cli({}).code == 2);
    CHECK(run_cli({"frobnicate"}).code == 2);
  }

  TEST_CASE("betti prints the vector and writes the barcode") {
    const auto dir = scratch("betti");
    REQUIRE(run_cli({"generate", "--system", "oscillator", "--n", "1000", "--seed", "7", "--out", s(dir)}).code == 0);
    const auto r = run_cli({"betti", "--input", s(dir / "data.csv"), "--landmarks", "200", "--out", s(dir / "barcode.json")});
    REQUIRE(r.code == 0);
    CHECK(r.out == "[1,1,0]\n");
    const auto bc = json::parse(slurp(dir / "barcode.json"));
    CHECK(bc.at("betti") == json::array({1, 1, 0}));
    CHECK(bc.at("diameter").get<double>() > 0.0);
    int infinite = 0;
    for (const auto& iv : bc.at("intervals")) {
      if (iv.at("death").is_null()) ++infinite;
    }
    CHECK(infinite == 2);
    const auto m = manifest(dir);
    CHECK(m.at("commands").contains("generate"));
    CHECK(m.at("commands").contains("betti"));
  }

  TEST_CASE("betti errors") {
    const auto dir = scratch("bettierr");
    CHECK(run_cli({"betti", "--input", s(dir / "missing.csv")}).code == 2);
    REQUIRE(run_cli({"generate", "--system", "orbit", "--n", "300", "--seed", "1", "--out", s(dir)}).code == 0);
    const auto r = run_cli({"betti", "--input", s(dir / "data.csv"), "--max-simplices", "1000"});
    CHECK(r.code == 3);
    CHECK(r.err.find("landmark") != std::string::npos);
    CHECK(run_cli({"betti", "--input", s(dir / "data.csv"), "--max-dim", "3"}).code == 2);
  }

  TEST_CASE("train, eval and export on a short oscillator run") {
    const auto dir = scratch("pipeline");
    REQUIRE(run_cli({"generate", "--system", "oscillator", "--n", "500", "--seed", "7", "--out", s(dir / "data")}).code == 0);
    auto r = run_cli({"train", "--input", s(dir / "data" / "data.csv"), "--term", "circle", "--tpv", "2", "--gpv", "1",
                      "--alpha", "1", "--beta", "1", "--gamma", "100", "--iters", "300", "--eval-every", "100",
                      "--seed", "7", "--quiet", "--out", s(dir / "run")});
    REQUIRE(r.code == 0);
    const auto loss = slurp(dir / "run" / "loss.csv");
    CHECK(loss.rfind("iteration,total,recon,topo,gpv\n0,", 0) == 0);
    CHECK(manifest(dir / "run").at("commands").at("train").at("config").at("training").at("iterations") == 300);

    r = run_cli({"eval", "--input", s(dir / "data" / "data.csv"), "--labels", s(dir / "data" / "data.labels.csv"),
                 "--checkpoint", s(dir / "run" / "checkpoint.json"), "--out", s(dir / "eval")});
    CHECK((r.code == 0 || r.code == 4));
    const auto report = json::parse(slurp(dir / "eval" / "report.json"));
    CHECK(report.contains("gpv_max_abs"));
    CHECK(tvae::load_csv(dir / "eval" / "latents.csv").columns() == std::vector<std::string>{"z0", "z1", "z2"});

    r = run_cli({"export", "--run", s(dir / "eval"), "--out", s(dir / "plots")});
    REQUIRE(r.code == 0);
    for (const char* f : {"latent_vs_x1.csv", "latent_vs_v.csv", "latent_scatter.csv", "latent_vs_hidden.csv"}) {
      CHECK(fs::exists(dir / "plots" / f));
    }
    CHECK(fs::exists(dir / "plots" / "manifest.json"));
  }

  TEST_CASE("untrained checkpoint fails evaluation with exit 4") {
    const auto dir = scratch("untrained");
    REQUIRE(run_cli({"generate", "--system", "oscillator", "--n", "300", "--seed", "2", "--out", s(dir)}).code == 0);
    REQUIRE(run_cli({"train", "--input", s(dir / "data.csv"), "--term", "circle", "--iters", "0", "--quiet", "--out",
                     s(dir / "run")})
                .code == 0);
    const auto r = run_cli({"eval", "--input", s(dir / "data.csv"), "--labels", s(dir / "data.labels.csv"),
                            "--checkpoint", s(dir / "run" / "checkpoint.json"), "--out", s(dir / "eval")});
    CHECK(r.code == 4);
    const auto report = json::parse(slurp(dir / "eval" / "report.json"));
    CHECK(report.at("manifold_residual_mean").get<double>() > 0.05);
    CHECK_FALSE(report.at("failures").empty());
  }

  TEST_CASE("train and eval argument errors exit 2") {
    const auto dir = scratch("trainerr");
    REQUIRE(run_cli({"generate", "--system", "qubit", "--n", "200", "--seed", "2", "--out", s(dir / "q")}).code == 0);
    REQUIRE(run_cli({"generate", "--system", "oscillator", "--n", "200", "--seed", "2", "--out", s(dir / "o")}).code == 0);
    CHECK(run_cli({"train", "--input", s(dir / "q" / "data.csv"), "--term", "sphere", "--tpv", "2", "--out", s(dir / "r")})
              .code == 2);
    CHECK(run_cli({"train", "--input", s(dir / "q" / "data.csv"), "--out", s(dir / "r")}).code == 2);
    CHECK(run_cli({"train", "--input", s(dir / "nope.csv"), "--term", "circle", "--out", s(dir / "r")}).code == 2);
    REQUIRE(run_cli({"train", "--input", s(dir / "o" / "data.csv"), "--term", "circle", "--iters", "1", "--quiet",
                     "--out", s(dir / "r")})
                .code == 0);
    CHECK(run_cli({"eval", "--input", s(dir / "q" / "data.csv"), "--checkpoint", s(dir / "r" / "checkpoint.json"), "--out",
                   s(dir / "e")})
              .code == 2);
    CHECK(run_cli({"eval", "--input", s(dir / "o" / "data.csv"), "--checkpoint", s(dir / "none.json"), "--out",
                   s(dir / "e")})
              .code == 2);
  }

  TEST_CASE("eval without labels omits the winding") {
    const auto dir = scratch("nolabels");
    REQUIRE(run_cli({"generate", "--system", "oscillator", "--n", "200", "--seed", "2", "--out", s(dir)}).code == 0);
    REQUIRE(run_cli({"train", "--input", s(dir / "data.csv"), "--term", "circle", "--iters", "5", "--quiet", "--out",
                     s(dir / "run")})
                .code == 0);
    run_cli({"eval", "--input", s(dir / "data.csv"), "--checkpoint", s(dir / "run" / "checkpoint.json"), "--out",
             s(dir / "eval")});
    CHECK(json::parse(slurp(dir / "eval" / "report.json")).at("winding_number").is_null());
  }

  TEST_CASE("export needs an evaluated run") {
    const auto dir = scratch("exporterr");
    CHECK(run_cli({"export", "--run", s(dir), "--out", s(dir / "out")}).code == 2);
  }

  TEST_CASE("qubit export compares azimuths") {
    const auto dir = scratch("qexport");
    REQUIRE(run_cli({"generate", "--system", "qubit", "--n", "300", "--seed", "2", "--out", s(dir)}).code == 0);
    REQUIRE(run_cli({"train", "--input", s(dir / "data.csv"), "--term", "sphere", "--iters", "2000", "--quiet", "--out",
                     s(dir / "run")})
                .code == 0);
    run_cli({"eval", "--input", s(dir / "data.csv"), "--labels", s(dir / "data.labels.csv"), "--checkpoint",
             s(dir / "run" / "checkpoint.json"), "--out", s(dir / "eval")});
    const auto r = run_cli({"export", "--run", s(dir / "eval"), "--out", s(dir / "plots")});
    REQUIRE(r.code == 0);
    REQUIRE(fs::exists(dir / "plots" / "azimuth_compare.csv"));
    CHECK(tvae::load_csv(dir / "plots" / "azimuth_compare.csv").columns() ==
          std::vector<std::string>{"theta0", "phi0", "theta1", "phi1"});
  }
}
