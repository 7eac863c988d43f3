#include "ultralocal/metric.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "ultralocal/error.hpp"

namespace ultralocal {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
    s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_row(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  while (true) {
    auto comma = line.find(',', start);
    cells.push_back(trim(line.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return cells;
}

std::optional<double> parse_number(std::string_view cell) {
  if (cell.empty()) return std::nullopt;
  if (cell.front() == '+') cell.remove_prefix(1);
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
  if (ec != std::errc{} || ptr != cell.data() + cell.size() || !std::isfinite(value))
    return std::nullopt;
  return value;
}

}  // namespace

PointSet::PointSet(std::vector<Point> points) : points_(std::move(points)) {
  if (points_.empty()) return;
  const auto dim = points_.front().coords.size();
  if (dim == 0) throw DataError("points must have dimension >= 1");
  for (std::size_t i = 0; i < points_.size(); ++i) {
    if (points_[i].id != i) throw DataError("point ids must be dense from 0");
    if (points_[i].coords.size() != dim)
      throw DataError("point " + std::to_string(i) + " has dimension " +
                      std::to_string(points_[i].coords.size()) + ", expected " +
                      std::to_string(dim));
  }
}

PointSet parse_points(std::string_view text, const CsvOptions& options) {
  std::vector<std::vector<std::string_view>> rows;
  std::vector<std::size_t> line_numbers;
  std::size_t line_no = 0;
  bool header_skipped = !options.has_header;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto nl = text.find('\n', pos);
    auto line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    if (line_no == 1 && line.starts_with("\xEF\xBB\xBF")) line.remove_prefix(3);
    if (trim(line).empty()) continue;
    if (!header_skipped) {
      header_skipped = true;
      continue;
    }
    rows.push_back(split_row(line));
    line_numbers.push_back(line_no);
  }
  if (rows.empty()) throw DataError("no data rows");

  const auto columns = rows.front().size();
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != columns)
      throw DataError("ragged row at line " + std::to_string(line_numbers[r]) + ": " +
                      std::to_string(rows[r].size()) + " columns, expected " +
                      std::to_string(columns));
  }

  auto label_column = options.label_column;
  if (!label_column && columns > 1 && !parse_number(rows.front().back()))
    label_column = columns - 1;
  if (label_column && *label_column >= columns)
    throw UsageError("label column " + std::to_string(*label_column) + " out of range (" +
                     std::to_string(columns) + " columns)");
  if (label_column && columns == 1) throw DataError("no coordinate columns besides the label");

  std::vector<Point> points;
  points.reserve(rows.size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    Point p;
    p.id = r;
    for (std::size_t c = 0; c < columns; ++c) {
      if (label_column && c == *label_column) {
        p.label = std::string(rows[r][c]);
        continue;
      }
      auto value = parse_number(rows[r][c]);
      if (!value)
        throw DataError("non-numeric cell at line " + std::to_string(line_numbers[r]) +
                        ", column " + std::to_string(c + 1) + ": '" + std::string(rows[r][c]) +
                        "'");
      p.coords.push_back(*value);
    }
    points.push_back(std::move(p));
  }
  return PointSet(std::move(points));
}

PointSet load_points(const std::filesystem::path& path, const CsvOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot read '" + path.string() + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_points(buffer.str(), options);
}

FiniteMetricSpace::FiniteMetricSpace(std::vector<double> row_major, std::vector<PointId> point_ids)
    : n_(point_ids.size()), dist_(std::move(row_major)), point_ids_(std::move(point_ids)) {
  if (dist_.size() != n_ * n_)
    throw DataError("distance matrix has " + std::to_string(dist_.size()) +
                    " entries, expected " + std::to_string(n_ * n_));
  validate();
}

FiniteMetricSpace::FiniteMetricSpace(std::size_t n, std::vector<double> row_major)
    : FiniteMetricSpace(std::move(row_major), [n] {
        std::vector<PointId> ids(n);
        std::iota(ids.begin(), ids.end(), PointId{0});
        return ids;
      }()) {}

FiniteMetricSpace::FiniteMetricSpace(Trusted, std::size_t n, std::vector<double> row_major,
                                     std::vector<PointId> point_ids)
    : n_(n), dist_(std::move(row_major)), point_ids_(std::move(point_ids)) {}

void FiniteMetricSpace::validate() const {
  if (n_ == 0) throw DataError("empty metric space");
  {
    auto sorted = point_ids_;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
      throw DataError("duplicate point ids");
  }
  auto at = [&](std::size_t i, std::size_t j) { return dist_[i * n_ + j]; };
  for (std::size_t i = 0; i < n_; ++i) {
    if (at(i, i) != 0.0) throw DataError("non-zero diagonal at " + std::to_string(i));
    for (std::size_t j = 0; j < n_; ++j) {
      const double d = at(i, j);
      if (!std::isfinite(d) || d < 0.0)
        throw DataError("distance (" + std::to_string(i) + "," + std::to_string(j) +
                        ") is negative or not finite");
      if (d != at(j, i))
        throw DataError("asymmetric distance at (" + std::to_string(i) + "," +
                        std::to_string(j) + ")");
    }
  }
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = i + 1; j < n_; ++j)
      for (std::size_t k = 0; k < n_; ++k)
        if (at(i, j) > at(i, k) + at(k, j) + kTolerance)
          throw DataError("triangle inequality fails for (" + std::to_string(i) + "," +
                          std::to_string(k) + "," + std::to_string(j) + ")");
}

std::optional<std::size_t> FiniteMetricSpace::index_of(PointId id) const {
  auto it = std::find(point_ids_.begin(), point_ids_.end(), id);
  if (it == point_ids_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - point_ids_.begin());
}

double euclidean_distance(std::span<const double> a, std::span<const double> b) noexcept {
  double sum = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double diff = a[k] - b[k];
    sum += diff * diff;
  }
  return std::sqrt(sum);
}

FiniteMetricSpace point_metric(const PointSet& points, const PointMetric& metric) {
  if (points.empty()) throw DataError("empty point set");
  const auto n = points.size();
  std::vector<double> dist(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const double d = metric(points[i].coords, points[j].coords);
      dist[i * n + j] = d;
      dist[j * n + i] = d;
    }
  std::vector<PointId> ids(n);
  for (std::size_t i = 0; i < n; ++i) ids[i] = points[i].id;
  return FiniteMetricSpace(std::move(dist), std::move(ids));
}

FiniteMetricSpace euclidean_metric(const PointSet& points) {
  return point_metric(points, euclidean_distance);
}

FiniteMetricSpace parse_distance_matrix(std::string_view text, bool has_header) {
  CsvOptions options;
  options.has_header = has_header;
  const auto rows = parse_points(text, options);
  const auto n = rows.size();
  if (rows.dimension() != n)
    throw DataError("distance matrix is " + std::to_string(n) + "x" +
                    std::to_string(rows.dimension()) + ", expected square");
  std::vector<double> dist;
  dist.reserve(n * n);
  for (const auto& p : rows.points()) dist.insert(dist.end(), p.coords.begin(), p.coords.end());
  return FiniteMetricSpace(n, std::move(dist));
}

FiniteMetricSpace restrict(const FiniteMetricSpace& space, std::span<const PointId> subset) {
  if (subset.empty()) throw UsageError("cannot restrict to an empty subset");
  std::vector<std::size_t> local;
  local.reserve(subset.size());
  for (auto id : subset) {
    auto idx = space.index_of(id);
    if (!idx) throw UsageError("unknown point id " + std::to_string(id));
    local.push_back(*idx);
  }
  std::sort(local.begin(), local.end(),
            [&](std::size_t a, std::size_t b) { return space.id(a) < space.id(b); });
  local.erase(std::unique(local.begin(), local.end()), local.end());

  const auto m = local.size();
  std::vector<double> dist(m * m);
  std::vector<PointId> ids(m);
  for (std::size_t a = 0; a < m; ++a) {
    ids[a] = space.id(local[a]);
    for (std::size_t b = 0; b < m; ++b) dist[a * m + b] = space(local[a], local[b]);
  }
  return FiniteMetricSpace(FiniteMetricSpace::Trusted{}, m, std::move(dist), std::move(ids));
}

}  // namespace ultralocal
