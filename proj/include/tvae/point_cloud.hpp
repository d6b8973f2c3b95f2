#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace tvae {

struct CloudMeta {
  std::string system;
  std::uint64_t seed = 0;
  std::map<std::string, std::string> params;

  bool operator==(const CloudMeta&) const = default;
};

// N points in R^dim, stored row-major. Every entry is finite and N >= 1.
class PointCloud {
 public:
  PointCloud() = default;
  // Throws ConfigError if values.size() is not a positive multiple of dim or
  // if any entry is non-finite.
  PointCloud(std::size_t dim, std::vector<double> values, CloudMeta meta = {},
             std::vector<std::string> columns = {});

  static PointCloud from_rows(const std::vector<std::vector<double>>& rows, CloudMeta meta = {});

  std::size_t size() const { return dim_ == 0 ? 0 : values_.size() / dim_; }
  std::size_t dim() const { return dim_; }
  bool empty() const { return values_.empty(); }

  std::span<const double> point(std::size_t i) const {
    return {values_.data() + i * dim_, dim_};
  }
  double at(std::size_t i, std::size_t j) const { return values_[i * dim_ + j]; }
  const std::vector<double>& values() const { return values_; }

  const CloudMeta& meta() const { return meta_; }
  CloudMeta& meta() { return meta_; }
  // Column headers; defaults to x0..x{dim-1}.
  const std::vector<std::string>& columns() const { return columns_; }

  // Rows selected by index, same columns and metadata.
  PointCloud subset(std::span<const std::size_t> rows) const;

  bool operator==(const PointCloud&) const = default;

 private:
  std::size_t dim_ = 0;
  std::vector<double> values_;
  CloudMeta meta_;
  std::vector<std::string> columns_;
};

std::vector<std::string> default_columns(std::string_view prefix, std::size_t dim);

double euclidean_distance(std::span<const double> a, std::span<const double> b);

// Shortest decimal string that parses back to exactly `v`.
std::string format_double(double v);

// CSV layout: optional leading `# key=value` metadata lines, a header row,
// then one row of decimal floats per point.
PointCloud load_csv(const std::filesystem::path& path);
void save_csv(const PointCloud& cloud, const std::filesystem::path& path);

PointCloud parse_csv(std::string_view text, const std::string& origin = "<memory>");
std::string to_csv(const PointCloud& cloud);

}  // namespace tvae
