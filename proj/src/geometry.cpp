#include "qpersist/geometry.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"

#include "qpersist/errors.hpp"

namespace qpersist {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

double parse_double(std::string_view field, std::size_t line_no) {
  field = trim(field);
  double value = 0.0;
  const auto* begin = field.data();
  const auto* end = field.data() + field.size();
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (field.empty() || ec != std::errc() || ptr != end || !std::isfinite(value)) {
    throw ParseError("line " + std::to_string(line_no) + ": cannot parse '" +
                     std::string(field) + "' as a number");
  }
  return value;
}

std::vector<std::vector<double>> parse_csv(std::string_view text) {
  std::vector<std::vector<double>> rows;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    auto line = trim(text.substr(pos, nl - pos));
    pos = nl + 1;
    ++line_no;
    if (line.empty() || line.front() == '#') continue;

    std::vector<double> row;
    std::size_t start = 0;
    while (true) {
      auto comma = line.find(',', start);
      row.push_back(parse_double(line.substr(start, comma - start), line_no));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<std::vector<double>> parse_json(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_array()) throw ParseError("JSON point cloud must be an array of arrays");
  std::vector<std::vector<double>> rows;
  for (const auto& entry : doc) {
    if (!entry.is_array()) throw ParseError("JSON point cloud must be an array of arrays");
    std::vector<double> row;
    for (const auto& x : entry) {
      if (!x.is_number()) throw ParseError("non-numeric coordinate in JSON point cloud");
      row.push_back(x.get<double>());
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

PointCloud::PointCloud(std::vector<std::vector<double>> points, Metric metric, std::size_t cap)
    : points_(std::move(points)), metric_(metric) {
  if (points_.empty()) throw InputError("no points");
  if (points_.size() > cap) {
    throw TooManyPoints(std::to_string(points_.size()) + " points exceed the cap of " +
                        std::to_string(cap));
  }
  const auto d = points_.front().size();
  if (d == 0) throw DimensionMismatch("points must have dimension >= 1");
  for (std::size_t i = 0; i < points_.size(); ++i) {
    if (points_[i].size() != d) {
      throw DimensionMismatch("point " + std::to_string(i) + " has dimension " +
                              std::to_string(points_[i].size()) + ", expected " +
                              std::to_string(d));
    }
  }
}

PointCloud PointCloud::with_metric(Metric metric) const {
  PointCloud copy = *this;
  copy.metric_ = metric;
  return copy;
}

DistanceMatrix::DistanceMatrix(Eigen::MatrixXd d) : d_(std::move(d)) {
  if (d_.rows() != d_.cols()) throw DimensionMismatch("distance matrix must be square");
  for (Eigen::Index i = 0; i < d_.rows(); ++i) {
    if (d_(i, i) != 0.0) throw DimensionMismatch("distance matrix must have zero diagonal");
    for (Eigen::Index j = 0; j < i; ++j) {
      if (d_(i, j) != d_(j, i) || !(d_(i, j) >= 0.0) || !std::isfinite(d_(i, j))) {
        throw DimensionMismatch("distance matrix must be symmetric, finite and nonnegative");
      }
    }
  }
}

double metric_distance(const std::vector<double>& a, const std::vector<double>& b, Metric metric) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double diff = std::abs(a[i] - b[i]);
    switch (metric) {
      case Metric::Euclidean: acc += diff * diff; break;
      case Metric::Manhattan: acc += diff; break;
      case Metric::Chebyshev: acc = std::max(acc, diff); break;
    }
  }
  return metric == Metric::Euclidean ? std::sqrt(acc) : acc;
}

DistanceMatrix distance_matrix(const PointCloud& cloud) {
  const auto n = static_cast<Eigen::Index>(cloud.size());
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      d(i, j) = d(j, i) = metric_distance(cloud.point(i), cloud.point(j), cloud.metric());
    }
  }
  return DistanceMatrix(std::move(d));
}

PointCloud parse_point_cloud(std::string_view text, CloudFormat format, std::size_t cap) {
  auto rows = format == CloudFormat::Csv ? parse_csv(text) : parse_json(text);
  return PointCloud(std::move(rows), Metric::Euclidean, cap);
}

PointCloud load_point_cloud(const std::filesystem::path& path, CloudFormat format,
                            std::size_t cap) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_point_cloud(buf.str(), format, cap);
}

CloudFormat format_from_extension(const std::filesystem::path& path) {
  auto ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
  return ext == ".json" ? CloudFormat::Json : CloudFormat::Csv;
}

PointCloud two_squares() {
  const double s = std::sqrt(2.0);
  return PointCloud({{0.0, 0.0}, {1.0, 0.0}, {1.0, 1.0}, {0.0, 1.0},
                     {4.0, 0.0}, {4.0 + s, 0.0}, {4.0 + s, s}, {4.0, s}});
}

}  // namespace qpersist
