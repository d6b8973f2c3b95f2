#include <bit>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>

#include "doctest.h"
#include "support.hpp"
#include "tvae/error.hpp"
#include "tvae/point_cloud.hpp"
#include "tvae/rng.hpp"

using namespace tvae;

namespace {

std::int64_t ulp_distance(double a, double b) {
  auto key = [](double x) {
    auto i = std::bit_cast<std::int64_t>(x);
    return i < 0 ? std::numeric_limits<std::int64_t>::min() - i : i;
  };
  return std::abs(key(a) - key(b));
}

std::filesystem::path temp_file(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / "tvae_pc_tests";
  std::filesystem::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST_SUITE("point_cloud") {
  TEST_CASE("parses header and rows") {
    auto c = parse_csv("x0,x1\n1.0,0.0\n0.0,1.0\n");
    CHECK(c.size() == 2);
    CHECK(c.dim() == 2);
    CHECK(c.at(1, 1) == 1.0);
  }

  TEST_CASE("metadata comment lines") {
    auto c = parse_csv("# system=orbit\n# seed=42\n# amplitude=0.25\nx0\n3\n");
    CHECK(c.meta().system == "orbit");
    CHECK(c.meta().seed == 42);
    CHECK(c.meta().params.at("amplitude") == "0.25");
  }

  TEST_CASE("parse errors name the line") {
    try {
      parse_csv("x0,x1\n1.0,abc\n", "f.csv");
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(std::string(e.what()).find("f.csv:2") != std::string::npos);
    }
    try {
      parse_csv("x0,x1\n1.0,2.0\n3.0\n", "g.csv");
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(std::string(e.what()).find("g.csv:3") != std::string::npos);
    }
    CHECK_THROWS_AS(parse_csv("x0,x1\n"), ParseError);
    CHECK_THROWS_AS(parse_csv(""), ParseError);
  }

  TEST_CASE("single row serialization") {
    auto c = PointCloud::from_rows({{1.5, 0.25, 0.0}});
    CHECK(to_csv(c) == "x0,x1,x2\n1.5,0.25,0\n");
  }

  TEST_CASE("empty and non-finite clouds are rejected") {
    CHECK_THROWS_AS(PointCloud(2, {}), ConfigError);
    CHECK_THROWS_AS(PointCloud(2, {1.0, std::nan("")}), ConfigError);
    CHECK_THROWS_AS(to_csv(PointCloud{}), ConfigError);
  }

  TEST_CASE("canonical body survives a load/save cycle byte for byte") {
    const std::string text = "# system=oscillator\n# seed=7\nx0,x1\n0.1,-2.5e-07\n3,0.30000000000000004\n";
    CHECK(to_csv(parse_csv(text)) == text);
  }

  TEST_CASE("random values round-trip within one ulp") {
    Rng r = rng_stream(123, "csv");
    std::vector<double> v;
    for (int i = 0; i < 3000; ++i) {
      const double mag = std::pow(10.0, r.uniform(-12.0, 12.0));
      v.push_back((r.uniform() < 0.5 ? -1.0 : 1.0) * mag * r.uniform());
    }
    PointCloud c(3, v, CloudMeta{"qubit", 99, {{"k", "v"}}});
    const auto path = temp_file("roundtrip.csv");
    save_csv(c, path);
    const auto back = load_csv(path);
    REQUIRE(back.size() == c.size());
    for (std::size_t i = 0; i < v.size(); ++i) CHECK(ulp_distance(back.values()[i], v[i]) <= 1);
    CHECK(back.meta() == c.meta());
  }

  TEST_CASE("missing file reports the path") {
    try {
      load_csv("/nonexistent/dir/x.csv");
      FAIL("expected IoError");
    } catch (const IoError& e) {
      CHECK(std::string(e.what()).find("/nonexistent/dir/x.csv") != std::string::npos);
    }
  }
}
