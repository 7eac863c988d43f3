#pragma once

#include <cstddef>
#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace ultralocal {

using PointId = std::size_t;

struct Point {
  PointId id = 0;
  std::vector<double> coords;
  std::optional<std::string> label;
};

// A labelled point cloud. Ids are dense from 0 and coordinate vectors share
// one dimension >= 1.
class PointSet {
 public:
  PointSet() = default;
  explicit PointSet(std::vector<Point> points);

  std::size_t size() const noexcept { return points_.size(); }
  bool empty() const noexcept { return points_.empty(); }
  std::size_t dimension() const noexcept {
    return points_.empty() ? 0 : points_.front().coords.size();
  }
  const Point& operator[](std::size_t i) const { return points_[i]; }
  std::span<const Point> points() const noexcept { return points_; }

 private:
  std::vector<Point> points_;
};

struct CsvOptions {
  bool has_header = true;
  // Column excluded from the coordinates. When unset, the last column is
  // used as label if its first data cell does not parse as a number.
  std::optional<std::size_t> label_column;
};

PointSet load_points(const std::filesystem::path& path, const CsvOptions& options = {});
PointSet parse_points(std::string_view text, const CsvOptions& options = {});

// Dense symmetric distance matrix over a finite set of points. The
// constructor validates the metric axioms (tolerance 1e-9) and throws
// DataError on failure.
class FiniteMetricSpace {
 public:
  static constexpr double kTolerance = 1e-9;

  FiniteMetricSpace(std::vector<double> row_major, std::vector<PointId> point_ids);
  FiniteMetricSpace(std::size_t n, std::vector<double> row_major);

  std::size_t size() const noexcept { return n_; }
  double operator()(std::size_t i, std::size_t j) const noexcept { return dist_[i * n_ + j]; }
  std::span<const double> row(std::size_t i) const noexcept {
    return std::span<const double>(dist_).subspan(i * n_, n_);
  }
  std::span<const double> data() const noexcept { return dist_; }
  // Original point id of local index i.
  PointId id(std::size_t i) const noexcept { return point_ids_[i]; }
  std::span<const PointId> point_ids() const noexcept { return point_ids_; }
  // Local index of an original point id, if present.
  std::optional<std::size_t> index_of(PointId id) const;

  friend bool operator==(const FiniteMetricSpace&, const FiniteMetricSpace&) = default;

 private:
  struct Trusted {};
  FiniteMetricSpace(Trusted, std::size_t n, std::vector<double> row_major,
                    std::vector<PointId> point_ids);
  void validate() const;

  friend FiniteMetricSpace restrict(const FiniteMetricSpace&, std::span<const PointId>);

  std::size_t n_ = 0;
  std::vector<double> dist_;
  std::vector<PointId> point_ids_;
};

using PointMetric = std::function<double(std::span<const double>, std::span<const double>)>;

double euclidean_distance(std::span<const double> a, std::span<const double> b) noexcept;

FiniteMetricSpace euclidean_metric(const PointSet& points);
FiniteMetricSpace point_metric(const PointSet& points, const PointMetric& metric);

// Square CSV of pairwise distances (no label column).
FiniteMetricSpace parse_distance_matrix(std::string_view text, bool has_header = false);

// Submetric on the given original point ids, in ascending id order.
FiniteMetricSpace restrict(const FiniteMetricSpace& space, std::span<const PointId> subset);

}  // namespace ultralocal
