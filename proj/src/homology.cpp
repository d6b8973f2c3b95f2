#include "tvae/homology.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "tvae/error.hpp"
#include "tvae/parallel.hpp"

namespace tvae::homology {

// ---------------------------------------------------------------------------
// Simplices and chains

Vertices::Vertices(std::initializer_list<std::uint32_t> vs)
    : Vertices(std::span<const std::uint32_t>(vs.begin(), vs.size())) {}

Vertices::Vertices(std::span<const std::uint32_t> vs) {
  if (vs.empty() || vs.size() > v_.size()) {
    throw ConfigError("a simplex has between 1 and 4 vertices");
  }
  for (std::size_t i = 0; i < vs.size(); ++i) {
    if (i > 0 && vs[i] <= vs[i - 1]) throw ConfigError("simplex vertices must be strictly increasing");
    v_[i] = vs[i];
  }
  size_ = static_cast<std::uint8_t>(vs.size());
}

Vertices Vertices::without(std::size_t i) const {
  Vertices out;
  for (std::size_t k = 0; k < size_; ++k) {
    if (k != i) out.v_[out.size_++] = v_[k];
  }
  return out;
}

bool filtration_less(const Simplex& a, const Simplex& b) {
  if (a.value != b.value) return a.value < b.value;
  return a.vertices < b.vertices;  // orders by size (dimension) first, then lexicographically
}

std::vector<Vertices> boundary(const Vertices& simplex) {
  std::vector<Vertices> faces;
  if (simplex.size() <= 1) return faces;
  faces.reserve(simplex.size());
  for (std::size_t i = 0; i < simplex.size(); ++i) faces.push_back(simplex.without(i));
  std::sort(faces.begin(), faces.end());
  return faces;
}

Chain chain_add(const Chain& a, const Chain& b) {
  Chain out;
  std::set_symmetric_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

Chain boundary(const Chain& chain) {
  Chain out;
  for (const auto& s : chain) {
    auto faces = boundary(s);
    out = chain_add(out, faces);
  }
  return out;
}

std::size_t FilteredComplex::count(int dim) const {
  return static_cast<std::size_t>(
      std::count_if(simplices.begin(), simplices.end(), [dim](const Simplex& s) { return s.dim() == dim; }));
}

// ---------------------------------------------------------------------------
// Face lookup

namespace {

constexpr std::uint32_t kMaxVertexIndex = 0xFFFF;

// Packs a simplex into 64 bits, 16 bits per vertex. Strictly increasing
// vertices make trailing slots of larger simplices non-zero, so the key is
// unique across dimensions.
std::uint64_t pack(const Vertices& v) {
  std::uint64_t key = 0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i] > kMaxVertexIndex) throw ResourceLimitError("vertex index exceeds 65535; use landmark subsampling");
    key |= static_cast<std::uint64_t>(v[i]) << (16 * i);
  }
  return key;
}

class FaceIndex {
 public:
  explicit FaceIndex(const std::vector<Simplex>& simplices) {
    entries_.reserve(simplices.size());
    for (std::size_t p = 0; p < simplices.size(); ++p) {
      entries_.emplace_back(pack(simplices[p].vertices), static_cast<std::uint32_t>(p));
    }
    std::sort(entries_.begin(), entries_.end());
    for (std::size_t i = 1; i < entries_.size(); ++i) {
      if (entries_[i].first == entries_[i - 1].first) throw ConfigError("duplicate simplex in complex");
    }
  }

  std::optional<std::uint32_t> find(const Vertices& v) const {
    const auto key = pack(v);
    auto it = std::lower_bound(entries_.begin(), entries_.end(), std::pair<std::uint64_t, std::uint32_t>{key, 0});
    if (it == entries_.end() || it->first != key) return std::nullopt;
    return it->second;
  }

 private:
  std::vector<std::pair<std::uint64_t, std::uint32_t>> entries_;
};

std::string describe(const Vertices& v) {
  std::string s = "[";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(v[i]);
  }
  return s + "]";
}

}  // namespace

void FilteredComplex::validate() const {
  if (max_dim < 0 || max_dim + 1 > kMaxSimplexDim) throw ConfigError("max_dim must be in [0, 2]");
  FaceIndex index(simplices);
  for (std::size_t p = 0; p < simplices.size(); ++p) {
    const auto& s = simplices[p];
    if (s.dim() > max_dim + 1) throw ConfigError("simplex " + describe(s.vertices) + " exceeds max_dim + 1");
    if (p > 0 && filtration_less(s, simplices[p - 1])) {
      throw ConfigError("simplices are not in filtration order at position " + std::to_string(p));
    }
    for (const auto& f : boundary(s.vertices)) {
      auto q = index.find(f);
      if (!q) throw ConfigError("face " + describe(f) + " of " + describe(s.vertices) + " is missing");
      if (*q >= p || simplices[*q].value > s.value) {
        throw ConfigError("face " + describe(f) + " does not precede " + describe(s.vertices));
      }
    }
  }
}

BoundaryMatrix boundary_matrix(const FilteredComplex& complex) {
  FaceIndex index(complex.simplices);
  BoundaryMatrix m;
  const auto n = complex.simplices.size();
  m.offsets.reserve(n + 1);
  m.dims.reserve(n);
  m.offsets.push_back(0);
  for (const auto& s : complex.simplices) {
    std::array<std::uint32_t, 4> col{};
    std::size_t k = 0;
    for (const auto& f : boundary(s.vertices)) {
      auto q = index.find(f);
      if (!q) throw ConfigError("face " + describe(f) + " of " + describe(s.vertices) + " is missing");
      col[k++] = *q;
    }
    std::sort(col.begin(), col.begin() + k);
    m.rows.insert(m.rows.end(), col.begin(), col.begin() + k);
    m.offsets.push_back(static_cast<std::uint32_t>(m.rows.size()));
    m.dims.push_back(static_cast<std::uint8_t>(s.dim()));
  }
  return m;
}

// ---------------------------------------------------------------------------
// Reduction

namespace {

using Column = std::vector<std::uint32_t>;

// a <- a + b over GF(2); both sorted ascending.
void add_into(Column& a, std::span<const std::uint32_t> b, Column& scratch) {
  scratch.clear();
  std::set_symmetric_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(scratch));
  a.swap(scratch);
}

void finish(std::vector<Interval>& out, Barcode& barcode) {
  std::erase_if(out, [](const Interval& iv) { return iv.death <= iv.birth; });
  std::sort(out.begin(), out.end(), [](const Interval& a, const Interval& b) {
    if (a.dim != b.dim) return a.dim < b.dim;
    if (a.birth != b.birth) return a.birth < b.birth;
    return a.death < b.death;
  });
  barcode.intervals = std::move(out);
}

Barcode reduce_boundary(const FilteredComplex& complex, const BoundaryMatrix& m) {
  const auto n = m.columns();
  const auto& sx = complex.simplices;
  std::vector<std::int64_t> owner(n, -1);  // row -> column whose low it is
  std::vector<Column> reduced(n);
  std::vector<char> cleared(n, 0);
  std::vector<char> killer(n, 0);
  std::vector<Interval> out;
  Column col, scratch;

  std::vector<std::vector<std::uint32_t>> by_dim(kMaxSimplexDim + 1);
  for (std::uint32_t j = 0; j < n; ++j) by_dim[m.dims[j]].push_back(j);

  // Top dimension first so lows can clear the columns of their rows.
  for (int d = complex.max_dim + 1; d >= 1; --d) {
    for (auto j : by_dim[d]) {
      if (cleared[j]) continue;
      auto c = m.column(j);
      col.assign(c.begin(), c.end());
      while (!col.empty()) {
        const auto o = owner[col.back()];
        if (o < 0) break;
        add_into(col, reduced[o], scratch);
      }
      if (col.empty()) continue;
      const auto low = col.back();
      owner[low] = j;
      cleared[low] = 1;
      killer[j] = 1;
      out.push_back({d - 1, sx[low].value, sx[j].value});
      reduced[j] = col;
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (m.dims[i] <= complex.max_dim && owner[i] < 0 && !killer[i]) {
      out.push_back({m.dims[i], sx[i].value, kInfinity});
    }
  }
  Barcode b;
  finish(out, b);
  return b;
}

Barcode reduce_coboundary(const FilteredComplex& complex, const BoundaryMatrix& m) {
  const auto n = m.columns();
  const auto& sx = complex.simplices;

  // Transpose: cofaces of each simplex, ascending by construction.
  std::vector<std::uint32_t> co_offsets(n + 1, 0);
  for (std::size_t j = 0; j < n; ++j) {
    for (auto r : m.column(j)) ++co_offsets[r + 1];
  }
  for (std::size_t i = 0; i < n; ++i) co_offsets[i + 1] += co_offsets[i];
  std::vector<std::uint32_t> co_rows(co_offsets.back());
  {
    auto fill = co_offsets;
    for (std::uint32_t j = 0; j < n; ++j) {
      for (auto r : m.column(j)) co_rows[fill[r]++] = j;
    }
  }

  std::vector<std::int64_t> owner(n, -1);  // coface -> column whose pivot it is
  std::vector<Column> reduced(n);
  std::vector<char> cleared(n, 0);
  std::vector<Interval> out;
  Column col, scratch;

  std::vector<std::vector<std::uint32_t>> by_dim(kMaxSimplexDim + 1);
  for (std::uint32_t j = 0; j < n; ++j) by_dim[m.dims[j]].push_back(j);

  for (int d = 0; d <= complex.max_dim; ++d) {
    const auto& cols = by_dim[d];
    for (auto it = cols.rbegin(); it != cols.rend(); ++it) {
      const auto j = *it;
      if (cleared[j]) continue;
      col.assign(co_rows.begin() + co_offsets[j], co_rows.begin() + co_offsets[j + 1]);
      while (!col.empty()) {
        const auto o = owner[col.front()];
        if (o < 0) break;
        add_into(col, reduced[o], scratch);
      }
      if (col.empty()) {
        out.push_back({d, sx[j].value, kInfinity});
        continue;
      }
      const auto pivot = col.front();
      owner[pivot] = j;
      cleared[pivot] = 1;
      out.push_back({d, sx[j].value, sx[pivot].value});
      reduced[j] = col;
    }
  }
  Barcode b;
  finish(out, b);
  return b;
}

}  // namespace

Barcode reduce_persistence(const FilteredComplex& complex, ReductionMethod method) {
  complex.validate();
  const auto m = boundary_matrix(complex);
  return method == ReductionMethod::boundary ? reduce_boundary(complex, m) : reduce_coboundary(complex, m);
}

std::size_t Barcode::count(int dim) const {
  return static_cast<std::size_t>(
      std::count_if(intervals.begin(), intervals.end(), [dim](const Interval& iv) { return iv.dim == dim; }));
}

std::string format_betti(const BettiVector& b) {
  return "[" + std::to_string(b[0]) + "," + std::to_string(b[1]) + "," + std::to_string(b[2]) + "]";
}

BettiVector betti_at(const Barcode& barcode, double eps) {
  BettiVector b{};
  for (const auto& iv : barcode.intervals) {
    if (iv.dim < 3 && iv.birth <= eps && eps < iv.death) ++b[iv.dim];
  }
  return b;
}

BettiVector infer_betti(const Barcode& barcode, double diameter, double lifetime_ratio) {
  if (!(diameter > 0.0)) throw ConfigError("diameter must be positive");
  if (!(lifetime_ratio > 0.0 && lifetime_ratio < 1.0)) throw ConfigError("lifetime ratio must lie in (0, 1)");
  const double cutoff = lifetime_ratio * diameter;
  BettiVector b{};
  for (const auto& iv : barcode.intervals) {
    if (iv.dim < 3 && (iv.infinite() || iv.lifetime() >= cutoff)) ++b[iv.dim];
  }
  return b;
}

// ---------------------------------------------------------------------------
// Rank oracle

namespace {

// Rank over GF(2) of a set of column bit vectors, by elimination on the
// highest set bit.
std::size_t gf2_rank(std::vector<std::vector<std::uint64_t>> columns) {
  std::map<std::size_t, std::vector<std::uint64_t>> basis;  // leading bit -> vector
  auto leading = [](const std::vector<std::uint64_t>& v) -> std::optional<std::size_t> {
    for (std::size_t w = v.size(); w-- > 0;) {
      if (v[w]) return w * 64 + (63 - static_cast<std::size_t>(__builtin_clzll(v[w])));
    }
    return std::nullopt;
  };
  for (auto& v : columns) {
    while (auto lead = leading(v)) {
      auto it = basis.find(*lead);
      if (it == basis.end()) {
        basis.emplace(*lead, std::move(v));
        break;
      }
      for (std::size_t w = 0; w < v.size(); ++w) v[w] ^= it->second[w];
    }
  }
  return basis.size();
}

}  // namespace

BettiVector betti_oracle(const FilteredComplex& complex, double epsilon, std::size_t max_simplices) {
  std::array<std::map<Vertices, std::size_t>, kMaxSimplexDim + 1> index;
  std::size_t total = 0;
  for (const auto& s : complex.simplices) {
    if (s.value > epsilon) continue;
    if (++total > max_simplices) {
      throw ResourceLimitError("complex at this scale has more than " + std::to_string(max_simplices) +
                               " simplices; subsample landmarks or lower epsilon");
    }
    auto& slot = index[s.dim()];
    slot.emplace(s.vertices, slot.size());
  }

  // rank of the boundary map from dim k to dim k-1
  auto rank = [&](int k) -> std::size_t {
    if (k < 1 || k > kMaxSimplexDim || index[k].empty()) return 0;
    const auto rows = index[k - 1].size();
    const auto words = (rows + 63) / 64;
    std::vector<std::vector<std::uint64_t>> cols;
    cols.reserve(index[k].size());
    for (const auto& [simplex, _] : index[k]) {
      std::vector<std::uint64_t> bits(words, 0);
      for (const auto& f : boundary(simplex)) {
        auto it = index[k - 1].find(f);
        if (it == index[k - 1].end()) throw ConfigError("subcomplex is not closed under faces");
        bits[it->second / 64] ^= std::uint64_t{1} << (it->second % 64);
      }
      cols.push_back(std::move(bits));
    }
    return gf2_rank(std::move(cols));
  };

  std::array<std::size_t, kMaxSimplexDim + 2> ranks{};
  for (int k = 1; k <= kMaxSimplexDim; ++k) ranks[k] = rank(k);

  BettiVector b{};
  for (int k = 0; k <= std::min(2, complex.max_dim); ++k) {
    b[k] = static_cast<int>(index[k].size()) - static_cast<int>(ranks[k]) - static_cast<int>(ranks[k + 1]);
  }
  return b;
}

// ---------------------------------------------------------------------------
// Point clouds to complexes

std::vector<std::size_t> farthest_point_sample(const PointCloud& cloud, std::size_t count) {
  const auto n = cloud.size();
  if (count == 0 || count > n) throw ConfigError("landmark count must lie in [1, N]");
  std::vector<std::size_t> picked;
  picked.reserve(count);
  std::vector<double> dist(n, kInfinity);
  std::size_t next = 0;
  for (std::size_t k = 0; k < count; ++k) {
    picked.push_back(next);
    const auto p = cloud.point(next);
    std::size_t best = 0;
    double best_d = -1.0;
    for (std::size_t i = 0; i < n; ++i) {
      dist[i] = std::min(dist[i], euclidean_distance(p, cloud.point(i)));
      if (dist[i] > best_d) {
        best_d = dist[i];
        best = i;
      }
    }
    next = best;
  }
  return picked;
}

double diameter(const PointCloud& cloud) {
  double d = 0.0;
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    for (std::size_t j = i + 1; j < cloud.size(); ++j) {
      d = std::max(d, euclidean_distance(cloud.point(i), cloud.point(j)));
    }
  }
  return d;
}

namespace {

constexpr std::size_t kMaxRipsPoints = 8192;

std::vector<std::uint32_t> intersect(const std::vector<std::uint32_t>& a, const std::vector<std::uint32_t>& b) {
  std::vector<std::uint32_t> out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

}  // namespace

FilteredComplex build_vr(const PointCloud& cloud, const VrOptions& options) {
  if (options.max_dim < 1 || options.max_dim > 2) throw ConfigError("max_dim must be 1 or 2");
  if (!(options.max_radius > 0.0)) throw ConfigError("max_radius must be positive");
  if (options.landmarks && *options.landmarks < 2) throw ConfigError("at least 2 landmarks are required");
  if (options.landmarks && *options.landmarks > cloud.size()) {
    throw ConfigError("landmark count exceeds the number of points");
  }

  std::vector<std::size_t> chosen;
  if (options.landmarks) {
    chosen = farthest_point_sample(cloud, *options.landmarks);
  } else {
    chosen.resize(cloud.size());
    for (std::size_t i = 0; i < chosen.size(); ++i) chosen[i] = i;
  }
  const auto n = chosen.size();
  if (n > kMaxRipsPoints) {
    throw ResourceLimitError("Rips complex on " + std::to_string(n) + " points exceeds the " +
                             std::to_string(kMaxRipsPoints) + "-point cap; pass a landmark count");
  }

  std::vector<double> dist(n * n, 0.0);
  parallel_for(n, options.threads, [&](std::size_t i) {
    for (std::size_t j = 0; j < n; ++j) {
      dist[i * n + j] = euclidean_distance(cloud.point(chosen[i]), cloud.point(chosen[j]));
    }
  });
  auto d = [&](std::uint32_t i, std::uint32_t j) { return dist[static_cast<std::size_t>(i) * n + j]; };

  // Higher-indexed neighbours within the cutoff.
  std::vector<std::vector<std::uint32_t>> up(n);
  for (std::uint32_t i = 0; i < n; ++i) {
    for (std::uint32_t j = i + 1; j < n; ++j) {
      if (d(i, j) <= options.max_radius) up[i].push_back(j);
    }
  }

  FilteredComplex complex;
  complex.max_dim = options.max_dim;
  auto& sx = complex.simplices;
  auto push = [&](Simplex s) {
    if (sx.size() >= options.max_simplices) {
      throw ResourceLimitError("Rips complex exceeds " + std::to_string(options.max_simplices) +
                               " simplices; reduce the landmark count or the radius");
    }
    sx.push_back(s);
  };

  const int top = options.max_dim + 1;
  for (std::uint32_t i = 0; i < n; ++i) {
    push({Vertices{i}, 0.0});
    for (auto j : up[i]) {
      const double dij = d(i, j);
      push({Vertices{i, j}, dij});
      if (top < 2) continue;
      const auto c2 = intersect(up[i], up[j]);
      for (auto k : c2) {
        const double dijk = std::max({dij, d(i, k), d(j, k)});
        push({Vertices{i, j, k}, dijk});
        if (top < 3) continue;
        for (auto l : c2) {
          if (l <= k || d(k, l) > options.max_radius) continue;
          push({Vertices{i, j, k, l}, std::max({dijk, d(i, l), d(j, l), d(k, l)})});
        }
      }
    }
  }
  std::sort(sx.begin(), sx.end(), filtration_less);
  return complex;
}

std::size_t default_landmarks(int max_dim) { return max_dim >= 2 ? 150 : 400; }

BettiResult compute_betti(const PointCloud& cloud, const BettiOptions& options) {
  if (options.max_dim < 1 || options.max_dim > 2) throw ConfigError("max_dim must be 1 or 2");
  if (!(options.radius_ratio > 0.0)) throw ConfigError("radius ratio must be positive");
  const auto k = std::min(options.landmarks.value_or(default_landmarks(options.max_dim)), cloud.size());
  if (k < 2) throw ConfigError("at least 2 landmarks are required");
  if (options.landmarks && *options.landmarks > cloud.size()) {
    throw ConfigError("landmark count exceeds the number of points");
  }

  const auto idx = farthest_point_sample(cloud, k);
  const auto sub = cloud.subset(idx);

  BettiResult r;
  r.landmarks = k;
  r.diameter = diameter(sub);
  if (!(r.diameter > 0.0)) throw ConfigError("point cloud has zero diameter");
  r.max_radius = options.radius_ratio * r.diameter;

  VrOptions vr;
  vr.max_dim = options.max_dim;
  vr.max_radius = r.max_radius;
  vr.max_simplices = options.max_simplices;
  vr.threads = options.threads;
  const auto complex = build_vr(sub, vr);
  r.simplices = complex.simplices.size();
  r.barcode = reduce_persistence(complex);
  r.betti = infer_betti(r.barcode, r.diameter, options.lifetime_ratio);
  return r;
}

}  // namespace tvae::homology
