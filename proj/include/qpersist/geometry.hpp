#pragma once

#include <cstddef>
#include <filesystem>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace qpersist {

enum class Metric { Euclidean, Manhattan, Chebyshev };

enum class CloudFormat { Csv, Json };

inline constexpr std::size_t kDefaultPointCap = 24;

/// A finite point cloud in R^d. All points share the same dimension.
class PointCloud {
 public:
  PointCloud(std::vector<std::vector<double>> points, Metric metric = Metric::Euclidean,
             std::size_t cap = kDefaultPointCap);

  std::size_t size() const { return points_.size(); }
  std::size_t dimension() const { return points_.front().size(); }
  Metric metric() const { return metric_; }
  const std::vector<double>& point(std::size_t i) const { return points_.at(i); }
  const std::vector<std::vector<double>>& points() const { return points_; }

  PointCloud with_metric(Metric metric) const;

 private:
  std::vector<std::vector<double>> points_;
  Metric metric_;
};

/// Symmetric pairwise distance matrix with zero diagonal.
class DistanceMatrix {
 public:
  explicit DistanceMatrix(Eigen::MatrixXd d);

  std::size_t size() const { return static_cast<std::size_t>(d_.rows()); }
  double operator()(std::size_t i, std::size_t j) const { return d_(i, j); }
  const Eigen::MatrixXd& matrix() const { return d_; }

 private:
  Eigen::MatrixXd d_;
};

double metric_distance(const std::vector<double>& a, const std::vector<double>& b, Metric metric);

DistanceMatrix distance_matrix(const PointCloud& cloud);

PointCloud parse_point_cloud(std::string_view text, CloudFormat format,
                             std::size_t cap = kDefaultPointCap);

PointCloud load_point_cloud(const std::filesystem::path& path, CloudFormat format,
                            std::size_t cap = kDefaultPointCap);

/// Picks the format from the file extension (".json" or anything else as CSV).
CloudFormat format_from_extension(const std::filesystem::path& path);

/// Two squares: side 1 at the origin, side sqrt(2) at x = 4.
/// Points 0..3 belong to the small square, 4..7 to the large one.
PointCloud two_squares();

}  // namespace qpersist
