#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tvae/point_cloud.hpp"

namespace tvae::homology {

// Simplices are capped at dimension 3, which is enough for Betti numbers up to
// beta_2.
inline constexpr int kMaxSimplexDim = 3;
inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

// Strictly increasing vertex indices, at most four of them.
class Vertices {
 public:
  Vertices() = default;
  Vertices(std::initializer_list<std::uint32_t> vs);
  explicit Vertices(std::span<const std::uint32_t> vs);

  std::size_t size() const { return size_; }
  int dim() const { return static_cast<int>(size_) - 1; }
  std::uint32_t operator[](std::size_t i) const { return v_[i]; }
  const std::uint32_t* begin() const { return v_.data(); }
  const std::uint32_t* end() const { return v_.data() + size_; }

  // Copy with the i-th vertex removed.
  Vertices without(std::size_t i) const;

  auto operator<=>(const Vertices& o) const {
    if (auto c = size_ <=> o.size_; c != 0) return c;
    for (std::size_t i = 0; i < size_; ++i) {
      if (auto c = v_[i] <=> o.v_[i]; c != 0) return c;
    }
    return std::strong_ordering::equal;
  }
  bool operator==(const Vertices& o) const { return (*this <=> o) == 0; }

 private:
  std::array<std::uint32_t, 4> v_{};
  std::uint8_t size_ = 0;
};

struct Simplex {
  Vertices vertices;
  // Scale at which the simplex enters: the largest pairwise distance of its
  // vertices, 0 for a vertex.
  double value = 0.0;

  int dim() const { return vertices.dim(); }
};

// Filtration order: by value, then dimension, then vertices lexicographically.
bool filtration_less(const Simplex& a, const Simplex& b);

struct FilteredComplex {
  std::vector<Simplex> simplices;
  // Highest homology dimension the complex supports; simplices go up to max_dim + 1.
  int max_dim = 1;

  std::size_t count(int dim) const;
  // Throws ConfigError when a face is missing, appears after a coface, or has a
  // larger filtration value than a coface.
  void validate() const;
};

// Facets of a simplex, each with coefficient 1 over GF(2). Empty for a vertex.
std::vector<Vertices> boundary(const Vertices& simplex);

// A GF(2) chain: a sorted set of simplices of one dimension.
using Chain = std::vector<Vertices>;
Chain chain_add(const Chain& a, const Chain& b);
Chain boundary(const Chain& chain);

// Boundary matrix over GF(2) in compressed-column form. Column j holds the
// filtration positions of the facets of simplex j, ascending.
struct BoundaryMatrix {
  std::vector<std::uint32_t> offsets;
  std::vector<std::uint32_t> rows;
  std::vector<std::uint8_t> dims;

  std::size_t columns() const { return dims.size(); }
  std::span<const std::uint32_t> column(std::size_t j) const {
    return {rows.data() + offsets[j], rows.data() + offsets[j + 1]};
  }
};

BoundaryMatrix boundary_matrix(const FilteredComplex& complex);

struct Interval {
  int dim = 0;
  double birth = 0.0;
  double death = kInfinity;

  bool infinite() const { return death == kInfinity; }
  double lifetime() const { return death - birth; }
  bool operator==(const Interval&) const = default;
};

struct Barcode {
  // Sorted by (dim, birth, death). Zero-length intervals are dropped.
  std::vector<Interval> intervals;

  std::size_t count(int dim) const;
  bool operator==(const Barcode&) const = default;
};

using BettiVector = std::array<int, 3>;

std::string format_betti(const BettiVector& b);

enum class ReductionMethod {
  // Column reduction of the boundary matrix, one dimension at a time from the
  // top down, skipping columns already known to be positive.
  boundary,
  // The same reduction applied to the anti-transposed (coboundary) matrix.
  // Produces the identical barcode and is far cheaper on Rips complexes.
  coboundary,
};

Barcode reduce_persistence(const FilteredComplex& complex,
                           ReductionMethod method = ReductionMethod::coboundary);

// Betti numbers at scale eps: bars with birth <= eps < death.
BettiVector betti_at(const Barcode& barcode, double eps);

// Bars of lifetime >= lifetime_ratio * diameter, plus every infinite bar.
BettiVector infer_betti(const Barcode& barcode, double diameter, double lifetime_ratio = 0.15);

// Brute-force Betti numbers of the subcomplex with value <= eps, from ranks of
// the boundary maps over GF(2). beta_k is reported for k <= complex.max_dim
// and zero above. Throws ResourceLimitError if the subcomplex has more than
// `max_simplices` simplices.
BettiVector betti_oracle(const FilteredComplex& complex, double epsilon,
                         std::size_t max_simplices = 5000);

// Greedy maxmin subsampling starting from index 0. Returns point indices in
// selection order.
std::vector<std::size_t> farthest_point_sample(const PointCloud& cloud, std::size_t count);

double diameter(const PointCloud& cloud);

struct VrOptions {
  int max_dim = 1;
  double max_radius = kInfinity;
  // Subsample this many landmarks by farthest-point sampling; all points when unset.
  std::optional<std::size_t> landmarks;
  // Cap on the total simplex count.
  std::size_t max_simplices = 20'000'000;
  unsigned threads = 0;
};

FilteredComplex build_vr(const PointCloud& cloud, const VrOptions& options);

struct BettiOptions {
  int max_dim = 1;
  // Defaults: 400 for max_dim 1, 150 for max_dim 2 (capped at the point count).
  std::optional<std::size_t> landmarks;
  double lifetime_ratio = 0.15;
  // Filtration cutoff as a fraction of the landmark-set diameter.
  double radius_ratio = 0.5;
  std::size_t max_simplices = 20'000'000;
  unsigned threads = 0;
};

struct BettiResult {
  Barcode barcode;
  BettiVector betti{};
  double diameter = 0.0;
  double max_radius = 0.0;
  std::size_t landmarks = 0;
  std::size_t simplices = 0;
};

// Landmarks, Rips filtration, reduction and Betti inference in one call.
BettiResult compute_betti(const PointCloud& cloud, const BettiOptions& options);

std::size_t default_landmarks(int max_dim);

}  // namespace tvae::homology
