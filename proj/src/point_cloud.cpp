#include "tvae/point_cloud.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "tvae/error.hpp"

namespace tvae {

PointCloud::PointCloud(std::size_t dim, std::vector<double> values, CloudMeta meta,
                       std::vector<std::string> columns)
    : dim_(dim), values_(std::move(values)), meta_(std::move(meta)), columns_(std::move(columns)) {
  if (dim_ == 0) throw ConfigError("point cloud dimension must be positive");
  if (values_.empty()) throw ConfigError("point cloud must contain at least one point");
  if (values_.size() % dim_ != 0) throw ConfigError("point cloud values are not a multiple of dim");
  for (std::size_t k = 0; k < values_.size(); ++k) {
    if (!std::isfinite(values_[k])) {
      throw ConfigError("non-finite entry at row " + std::to_string(k / dim_) + ", column " +
                        std::to_string(k % dim_));
    }
  }
  if (columns_.empty()) columns_ = default_columns("x", dim_);
  if (columns_.size() != dim_) throw ConfigError("column header count does not match dim");
}

PointCloud PointCloud::from_rows(const std::vector<std::vector<double>>& rows, CloudMeta meta) {
  if (rows.empty()) throw ConfigError("point cloud must contain at least one point");
  const std::size_t dim = rows.front().size();
  std::vector<double> flat;
  flat.reserve(rows.size() * dim);
  for (const auto& r : rows) {
    if (r.size() != dim) throw ConfigError("ragged rows in point cloud");
    flat.insert(flat.end(), r.begin(), r.end());
  }
  return PointCloud(dim, std::move(flat), std::move(meta));
}

PointCloud PointCloud::subset(std::span<const std::size_t> rows) const {
  std::vector<double> flat;
  flat.reserve(rows.size() * dim_);
  for (auto r : rows) {
    auto p = point(r);
    flat.insert(flat.end(), p.begin(), p.end());
  }
  return PointCloud(dim_, std::move(flat), meta_, columns_);
}

std::vector<std::string> default_columns(std::string_view prefix, std::size_t dim) {
  std::vector<std::string> cols;
  cols.reserve(dim);
  for (std::size_t i = 0; i < dim; ++i) cols.push_back(std::string(prefix) + std::to_string(i));
  return cols;
}

double euclidean_distance(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return std::sqrt(s);
}

std::string format_double(double v) {
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc{}) throw NumericError("cannot format value");
  return std::string(buf, end);
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_commas(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(',', start);
    if (pos == std::string_view::npos) {
      cells.push_back(trim(line.substr(start)));
      break;
    }
    cells.push_back(trim(line.substr(start, pos - start)));
    start = pos + 1;
  }
  return cells;
}

[[noreturn]] void fail(const std::string& origin, std::size_t line, const std::string& what) {
  throw ParseError(origin + ":" + std::to_string(line) + ": " + what);
}

}  // namespace

PointCloud parse_csv(std::string_view text, const std::string& origin) {
  CloudMeta meta;
  std::vector<std::string> columns;
  std::vector<double> values;
  std::size_t line_no = 0;
  bool have_header = false;

  std::size_t pos = 0;
  while (pos < text.size()) {
    auto nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    auto line = trim(text.substr(pos, nl - pos));
    pos = nl + 1;
    ++line_no;
    if (line.empty()) continue;

    if (line.front() == '#') {
      auto body = trim(line.substr(1));
      auto eq = body.find('=');
      if (eq == std::string_view::npos) continue;  // free-form comment
      std::string key(trim(body.substr(0, eq)));
      std::string value(trim(body.substr(eq + 1)));
      if (key == "system") {
        meta.system = value;
      } else if (key == "seed") {
        auto [p, ec] = std::from_chars(value.data(), value.data() + value.size(), meta.seed);
        if (ec != std::errc{} || p != value.data() + value.size()) fail(origin, line_no, "bad seed '" + value + "'");
      } else {
        meta.params[key] = value;
      }
      continue;
    }

    auto cells = split_commas(line);
    if (!have_header) {
      for (auto c : cells) {
        if (c.empty()) fail(origin, line_no, "empty column name in header");
        columns.emplace_back(c);
      }
      have_header = true;
      continue;
    }
    if (cells.size() != columns.size()) {
      fail(origin, line_no,
           "expected " + std::to_string(columns.size()) + " values, found " + std::to_string(cells.size()));
    }
    for (auto c : cells) {
      double v = 0.0;
      auto [p, ec] = std::from_chars(c.data(), c.data() + c.size(), v);
      if (ec != std::errc{} || p != c.data() + c.size() || c.empty()) {
        fail(origin, line_no, "non-numeric value '" + std::string(c) + "'");
      }
      if (!std::isfinite(v)) fail(origin, line_no, "non-finite value '" + std::string(c) + "'");
      values.push_back(v);
    }
  }
  if (!have_header) throw ParseError(origin + ": missing header row");
  if (values.empty()) throw ParseError(origin + ": no data rows");
  const auto dim = columns.size();
  return PointCloud(dim, std::move(values), std::move(meta), std::move(columns));
}

std::string to_csv(const PointCloud& cloud) {
  if (cloud.empty()) throw ConfigError("cannot serialize an empty point cloud");
  std::string out;
  const auto& meta = cloud.meta();
  if (!meta.system.empty()) out += "# system=" + meta.system + "\n";
  if (!meta.system.empty() || meta.seed != 0) out += "# seed=" + std::to_string(meta.seed) + "\n";
  for (const auto& [k, v] : meta.params) out += "# " + k + "=" + v + "\n";
  const auto& cols = cloud.columns();
  for (std::size_t j = 0; j < cols.size(); ++j) {
    if (j) out += ',';
    out += cols[j];
  }
  out += '\n';
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    for (std::size_t j = 0; j < cloud.dim(); ++j) {
      if (j) out += ',';
      out += format_double(cloud.at(i, j));
    }
    out += '\n';
  }
  return out;
}

PointCloud load_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_csv(ss.str(), path.string());
}

void save_csv(const PointCloud& cloud, const std::filesystem::path& path) {
  const auto text = to_csv(cloud);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << text;
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

}  // namespace tvae
